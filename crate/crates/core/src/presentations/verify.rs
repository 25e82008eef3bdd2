use std::collections::{BTreeMap, HashMap};

use rayon::prelude::*;
use serde::Serialize;
use thiserror::Error;

use crate::exact::Scalar;
use crate::linalg::{SparseOperator, SparseVec};

use super::{Fault, Generator, Lin, RelationExpression};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ApplyError {
    #[error("generator {0} has no assigned operator")]
    Unassigned(Generator),
    /// The image left the finite part of the space that is represented.
    #[error("image left the represented window: {0}")]
    Escaped(String),
    #[error("arithmetic failure: {0}")]
    Arithmetic(String),
}

/// Concrete action of the generators on some vector type.
pub trait Representation: Sync {
    type Scalar: Scalar;
    type Vector: Clone + Send + Sync;

    fn apply(&self, g: Generator, v: &Self::Vector) -> Result<Self::Vector, ApplyError>;
    fn zero_vector(&self) -> Self::Vector;
    /// acc += c·v
    fn axpy(&self, acc: &mut Self::Vector, c: &Self::Scalar, v: &Self::Vector);
    fn is_zero(&self, v: &Self::Vector) -> bool;
    fn describe(&self, v: &Self::Vector) -> String;
}

/// Apply the word right to left.
pub fn apply_word<R: Representation>(
    rep: &R,
    word: &[Generator],
    v: &R::Vector,
) -> Result<R::Vector, ApplyError> {
    let mut cur = v.clone();
    for &g in word.iter().rev() {
        cur = rep.apply(g, &cur)?;
    }
    Ok(cur)
}

/// Apply a linear combination of words, sharing images of common suffixes.
pub fn apply_lin<R: Representation>(
    rep: &R,
    lin: &Lin<R::Scalar>,
    v: &R::Vector,
) -> Result<R::Vector, ApplyError> {
    let mut memo: HashMap<Vec<Generator>, R::Vector> = HashMap::new();
    let mut out = rep.zero_vector();
    for (word, c) in lin.terms() {
        let start = (0..word.len())
            .find(|&k| memo.contains_key(&word[k..]))
            .unwrap_or(word.len());
        let mut cur = if start == word.len() {
            v.clone()
        } else {
            memo[&word[start..]].clone()
        };
        // memo holds word[start..]; extend leftwards.
        for k in (0..start).rev() {
            cur = rep.apply(word[k], &cur)?;
            memo.insert(word[k..].to_vec(), cur.clone());
        }
        rep.axpy(&mut out, c, &cur);
    }
    Ok(out)
}

/// Named vector of the verification domain.
#[derive(Clone, Debug)]
pub struct DomainVector<V> {
    pub label: String,
    pub vector: V,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Ok,
    Fail,
    Partial,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct RelationResult {
    pub relation: String,
    pub status: Status,
    pub checked: usize,
    pub skipped: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub residual: Option<String>,
}

#[derive(Clone, Debug, Default, PartialEq, Serialize)]
pub struct VerificationReport {
    pub results: Vec<RelationResult>,
}

impl VerificationReport {
    pub fn all_ok(&self) -> bool {
        self.results.iter().all(|r| r.status == Status::Ok)
    }

    pub fn any_fail(&self) -> bool {
        self.results.iter().any(|r| r.status == Status::Fail)
    }

    pub fn failures(&self) -> impl Iterator<Item = &RelationResult> {
        self.results.iter().filter(|r| r.status == Status::Fail)
    }

    pub fn count(&self, status: Status) -> usize {
        self.results.iter().filter(|r| r.status == status).count()
    }

    pub fn checked(&self) -> usize {
        self.results.iter().map(|r| r.checked).sum()
    }

    pub fn skipped(&self) -> usize {
        self.results.iter().map(|r| r.skipped).sum()
    }

    pub fn get(&self, relation: &str) -> Option<&RelationResult> {
        self.results.iter().find(|r| r.relation == relation)
    }

    pub fn extend(&mut self, other: VerificationReport) {
        self.results.extend(other.results);
    }

    /// Aggregate by the relation label with its index instance removed,
    /// e.g. `dDAHA-L.vii.[y,X].i=1` ↦ `dDAHA-L.vii.[y,X]`.
    pub fn by_family(&self) -> BTreeMap<String, (usize, usize)> {
        let mut out = BTreeMap::new();
        for r in &self.results {
            let family = match r.relation.rfind(".i=").or_else(|| r.relation.rfind(".j=")) {
                Some(k) => r.relation[..k].to_string(),
                None => r.relation.clone(),
            };
            let e = out.entry(family).or_insert((0, 0));
            e.0 += 1;
            if r.status == Status::Ok {
                e.1 += 1;
            }
        }
        out
    }
}

/// Evaluate every relation on every domain vector. A relation fails at its
/// first nonzero residual; escaped images are counted as skipped. A missing
/// generator aborts the whole run.
pub fn verify<R: Representation>(
    rep: &R,
    relations: &[RelationExpression<R::Scalar>],
    domain: &[DomainVector<R::Vector>],
) -> Result<VerificationReport, ApplyError> {
    let results: Result<Vec<RelationResult>, ApplyError> = relations
        .par_iter()
        .map(|rel| check_relation(rep, rel, domain))
        .collect();
    Ok(VerificationReport { results: results? })
}

fn check_relation<R: Representation>(
    rep: &R,
    rel: &RelationExpression<R::Scalar>,
    domain: &[DomainVector<R::Vector>],
) -> Result<RelationResult, ApplyError> {
    let mut result = RelationResult {
        relation: rel.name.clone(),
        status: Status::Ok,
        checked: 0,
        skipped: 0,
        witness: None,
        residual: None,
    };
    for dv in domain {
        match apply_lin(rep, &rel.lin, &dv.vector) {
            Ok(res) => {
                result.checked += 1;
                if !rep.is_zero(&res) {
                    result.status = Status::Fail;
                    result.witness = Some(dv.label.clone());
                    result.residual = Some(rep.describe(&res));
                    return Ok(result);
                }
            }
            Err(ApplyError::Escaped(_)) => result.skipped += 1,
            Err(e) => return Err(e),
        }
    }
    if result.skipped > 0 || result.checked == 0 {
        result.status = Status::Partial;
    }
    Ok(result)
}

/// Assignment of window operators; an undefined column counts as escaping.
#[derive(Clone, Debug)]
pub struct OperatorRep<S> {
    pub dim: usize,
    pub operators: BTreeMap<Generator, SparseOperator<S>>,
    pub labels: Vec<String>,
}

impl<S: Scalar> Representation for OperatorRep<S> {
    type Scalar = S;
    type Vector = SparseVec<usize, S>;

    fn apply(&self, g: Generator, v: &Self::Vector) -> Result<Self::Vector, ApplyError> {
        let op = self.operators.get(&g).ok_or(ApplyError::Unassigned(g))?;
        op.apply(v).map_err(|col| {
            let label = self.labels.get(col).cloned().unwrap_or_else(|| col.to_string());
            ApplyError::Escaped(format!("{g} undefined on {label}"))
        })
    }

    fn zero_vector(&self) -> Self::Vector {
        SparseVec::new()
    }

    fn axpy(&self, acc: &mut Self::Vector, c: &S, v: &Self::Vector) {
        acc.add_scaled(c, v);
    }

    fn is_zero(&self, v: &Self::Vector) -> bool {
        v.is_zero()
    }

    fn describe(&self, v: &Self::Vector) -> String {
        describe_sparse(v, |k| self.labels.get(*k).cloned().unwrap_or_else(|| k.to_string()))
    }
}

/// `c1·label1 + c2·label2 + …` in key order.
pub fn describe_sparse<K: Ord + Clone, S: Scalar>(
    v: &SparseVec<K, S>,
    label: impl Fn(&K) -> String,
) -> String {
    if v.is_zero() {
        return "0".to_string();
    }
    v.iter()
        .map(|(k, c)| format!("({c})·{}", label(k)))
        .collect::<Vec<_>>()
        .join(" + ")
}

/// ỹ_i realised as the shift-map image of y_i in the inner representation.
pub struct ShiftedRep<'a, R: Representation> {
    inner: &'a R,
    shift: Vec<Lin<R::Scalar>>,
}

impl<'a, R: Representation> ShiftedRep<'a, R> {
    pub fn new(inner: &'a R, shift: Vec<Lin<R::Scalar>>) -> Self {
        ShiftedRep { inner, shift }
    }
}

impl<R: Representation> Representation for ShiftedRep<'_, R> {
    type Scalar = R::Scalar;
    type Vector = R::Vector;

    fn apply(&self, g: Generator, v: &Self::Vector) -> Result<Self::Vector, ApplyError> {
        match g {
            Generator::YTilde(i) => {
                let lin = self.shift.get(i).ok_or(ApplyError::Unassigned(g))?;
                apply_lin(self.inner, lin, v)
            }
            _ => self.inner.apply(g, v),
        }
    }

    fn zero_vector(&self) -> Self::Vector {
        self.inner.zero_vector()
    }

    fn axpy(&self, acc: &mut Self::Vector, c: &Self::Scalar, v: &Self::Vector) {
        self.inner.axpy(acc, c, v)
    }

    fn is_zero(&self, v: &Self::Vector) -> bool {
        self.inner.is_zero(v)
    }

    fn describe(&self, v: &Self::Vector) -> String {
        self.inner.describe(v)
    }
}

/// One generator replaced by g + c·Id or g + c·h.
pub struct Perturbed<'a, R: Representation> {
    inner: &'a R,
    generator: Generator,
    shift: R::Scalar,
    by: Option<Generator>,
}

impl<'a, R: Representation> Perturbed<'a, R> {
    pub fn new(inner: &'a R, fault: &Fault) -> Self {
        Perturbed {
            inner,
            generator: fault.generator,
            shift: R::Scalar::from_rational(&fault.shift),
            by: fault.by,
        }
    }
}

impl<R: Representation> Representation for Perturbed<'_, R> {
    type Scalar = R::Scalar;
    type Vector = R::Vector;

    fn apply(&self, g: Generator, v: &Self::Vector) -> Result<Self::Vector, ApplyError> {
        let mut out = self.inner.apply(g, v)?;
        if g == self.generator {
            match self.by {
                Some(h) => {
                    let extra = self.inner.apply(h, v)?;
                    self.inner.axpy(&mut out, &self.shift, &extra);
                }
                None => self.inner.axpy(&mut out, &self.shift, v),
            }
        }
        Ok(out)
    }

    fn zero_vector(&self) -> Self::Vector {
        self.inner.zero_vector()
    }

    fn axpy(&self, acc: &mut Self::Vector, c: &Self::Scalar, v: &Self::Vector) {
        self.inner.axpy(acc, c, v)
    }

    fn is_zero(&self, v: &Self::Vector) -> bool {
        self.inner.is_zero(v)
    }

    fn describe(&self, v: &Self::Vector) -> String {
        self.inner.describe(v)
    }
}

/// y_i and ỹ_i multiplied by a fixed scalar a; a representation of
/// H(κ₁, κ₂) becomes one of H(aκ₁, aκ₂).
pub struct ScaledY<'a, R: Representation> {
    inner: &'a R,
    factor: R::Scalar,
}

impl<'a, R: Representation> ScaledY<'a, R> {
    pub fn new(inner: &'a R, factor: R::Scalar) -> Self {
        ScaledY { inner, factor }
    }
}

impl<R: Representation> Representation for ScaledY<'_, R> {
    type Scalar = R::Scalar;
    type Vector = R::Vector;

    fn apply(&self, g: Generator, v: &Self::Vector) -> Result<Self::Vector, ApplyError> {
        let out = self.inner.apply(g, v)?;
        match g {
            Generator::Y(_) | Generator::YTilde(_) => {
                let mut scaled = self.inner.zero_vector();
                self.inner.axpy(&mut scaled, &self.factor, &out);
                Ok(scaled)
            }
            _ => Ok(out),
        }
    }

    fn zero_vector(&self) -> Self::Vector {
        self.inner.zero_vector()
    }

    fn axpy(&self, acc: &mut Self::Vector, c: &Self::Scalar, v: &Self::Vector) {
        self.inner.axpy(acc, c, v)
    }

    fn is_zero(&self, v: &Self::Vector) -> bool {
        self.inner.is_zero(v)
    }

    fn describe(&self, v: &Self::Vector) -> String {
        self.inner.describe(v)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::Rational;
    use crate::presentations::{relation_set, Params, Presentation};

    fn identity_rep(dim: usize, gens: &[Generator]) -> OperatorRep<Rational> {
        OperatorRep {
            dim,
            operators: gens.iter().map(|&g| (g, SparseOperator::identity(dim))).collect(),
            labels: (0..dim).map(|i| format!("e{i}")).collect(),
        }
    }

    fn basis(dim: usize) -> Vec<DomainVector<SparseVec<usize, Rational>>> {
        (0..dim)
            .map(|i| DomainVector {
                label: format!("e{i}"),
                vector: SparseVec::unit(i),
            })
            .collect()
    }

    #[test]
    fn identity_assignment_satisfies_involution() {
        let rep = identity_rep(3, &[Generator::simple(0)]);
        let s = Lin::<Rational>::g(Generator::simple(0));
        let rel = RelationExpression {
            name: "S^2".into(),
            lin: s.times(&s).minus(&Lin::identity()),
        };
        let report = verify(&rep, &[rel], &basis(3)).unwrap();
        assert!(report.all_ok());
        assert_eq!(report.results[0].checked, 3);
    }

    #[test]
    fn missing_generator_is_an_error() {
        let rep = identity_rep(2, &[]);
        let rels = relation_set(
            Presentation::Lusztig,
            1,
            &Params::Daha {
                kappa1: Rational::one(),
                kappa2: Rational::one(),
            },
        );
        assert_eq!(
            verify(&rep, &rels, &basis(2)).unwrap_err(),
            ApplyError::Unassigned(Generator::Gamma(0))
        );
    }

    #[test]
    fn undefined_columns_are_skipped() {
        let g = Generator::Gamma(0);
        let mut rep = identity_rep(2, &[g]);
        rep.operators.insert(
            g,
            SparseOperator::from_columns(2, vec![Some(SparseVec::unit(0)), None]),
        );
        let gl = Lin::<Rational>::g(g);
        let rel = RelationExpression {
            name: "g^2".into(),
            lin: gl.times(&gl).minus(&Lin::identity()),
        };
        let r = verify(&rep, &[rel], &basis(2)).unwrap();
        assert_eq!(r.results[0].status, Status::Partial);
        assert_eq!((r.results[0].checked, r.results[0].skipped), (1, 1));
    }

    #[test]
    fn fault_produces_witness() {
        let g = Generator::Gamma(0);
        let rep = identity_rep(2, &[g]);
        let fault: Fault = "g1+1".parse().unwrap();
        let bad = Perturbed::new(&rep, &fault);
        let gl = Lin::<Rational>::g(g);
        let rel = RelationExpression {
            name: "g^2".into(),
            lin: gl.times(&gl).minus(&Lin::identity()),
        };
        let r = verify(&bad, &[rel], &basis(2)).unwrap();
        assert_eq!(r.results[0].status, Status::Fail);
        assert_eq!(r.results[0].witness.as_deref(), Some("e0"));
        assert_eq!(r.results[0].residual.as_deref(), Some("(3)·e0"));
        let json = serde_json::to_string(&r).unwrap();
        assert!(json.contains("\"status\":\"fail\""));
    }

    #[test]
    fn memoised_application_matches_naive() {
        let a = Generator::simple(0);
        let b = Generator::Gamma(1);
        let mut rep = identity_rep(2, &[a, b]);
        let swap = SparseOperator::from_columns(
            2,
            vec![Some(SparseVec::unit(1)), Some(SparseVec::unit(0))],
        );
        let diag = SparseOperator::from_columns(
            2,
            vec![
                Some(SparseVec::unit(0)),
                Some(SparseVec::unit(1).scaled(&Rational::integer(-1))),
            ],
        );
        rep.operators.insert(a, swap);
        rep.operators.insert(b, diag);
        let lin = Lin::<Rational>::word(&[a, b, a])
            .plus(&Lin::word(&[b, a]).scaled(&Rational::integer(2)))
            .plus(&Lin::word(&[a, b]));
        let v = SparseVec::from_entries([(0, Rational::integer(5)), (1, Rational::integer(7))]);
        let mut naive = SparseVec::new();
        for (w, c) in lin.terms() {
            naive.add_scaled(c, &apply_word(&rep, w, &v).unwrap());
        }
        assert_eq!(apply_lin(&rep, &lin, &v).unwrap(), naive);
    }
}
