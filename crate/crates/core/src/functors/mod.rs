//! Functors from gl_N-modules to dAHA and dDAHA representations, and the
//! spectral map θ*.

use std::collections::{BTreeMap, BTreeSet};

use serde_json::{json, Value};
use thiserror::Error;

use crate::exact::{ExactError, Rational, Scalar};
use crate::glmodules::{
    GlElement, GlModule, Gl2TensorFieldModule, ModuleError, SymmetricPair, TensorSpace,
};
use crate::linalg::{kernel, SparseOperator, SparseVec, Subspace};
use crate::presentations::{
    apply_word, relation_set, verify, ApplyError, Representation, DomainVector, Generator, OperatorRep, Params, Presentation,
    VerificationReport,
};
use crate::weylbc::{enumerate_group, SignedPermutation, WeylError};

mod ddaha;
mod theta;

pub use ddaha::{
    build_ddaha, restriction_consistency, supporting_relations, DdahaBuild, TwistedRep,
    MAX_DDAHA_FACTORS,
};
pub use theta::{parse_even_laurent, theta_at_identity, theta_star, ThetaStar};

/// Ambient tensor spaces larger than this are refused.
pub const MAX_AMBIENT_DIM: usize = 20_000;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum FunctorError {
    #[error(transparent)]
    Module(#[from] ModuleError),
    #[error(transparent)]
    Weyl(#[from] WeylError),
    #[error(transparent)]
    Apply(#[from] ApplyError),
    #[error(transparent)]
    Exact(#[from] ExactError),
    /// Invariants are mapped outside the invariant subspace. This is a bug,
    /// never a reason to project.
    #[error("{operator} does not preserve the invariant subspace (basis vector {vector})")]
    NotPreserved { operator: String, vector: usize },
    #[error("ambient dimension {dim} exceeds the size guard {limit}")]
    TooLarge { dim: usize, limit: usize },
    #[error("{0}")]
    Invalid(String),
}

/// Solutions of (x_total − μχ(x))v = 0 for x in the 𝔨₀ basis, inside
/// M ⊗ V^{⊗n}. Basis vectors whose 𝔨₀-images leave a windowed M are forced
/// to zero and listed in `excluded`.
#[derive(Clone, Debug)]
pub struct InvariantSubspace<S> {
    pub space: TensorSpace,
    pub pair: SymmetricPair,
    pub mu: S,
    pub subspace: Subspace<S>,
    pub excluded: Vec<usize>,
    pub ambient_labels: Vec<String>,
}

impl<S: Scalar> InvariantSubspace<S> {
    pub fn dim(&self) -> usize {
        self.subspace.dim()
    }

    pub fn basis(&self) -> &[SparseVec<usize, S>] {
        &self.subspace.vectors
    }

    /// Label of invariant basis vector b: its leading ambient coordinate.
    pub fn label(&self, b: usize) -> String {
        let v = &self.subspace.vectors[b];
        let lead = v.first_key().copied().unwrap_or(0);
        let more = if v.len() > 1 { format!(" (+{})", v.len() - 1) } else { String::new() };
        format!("inv{}[{}{}]", b + 1, self.ambient_labels[lead], more)
    }
}

/// x acting on every factor of M ⊗ V^{⊗n}; Err when M clips the image.
fn total_action<M: GlModule>(
    module: &M,
    space: &TensorSpace,
    x: &GlElement,
    flat: usize,
) -> Result<SparseVec<usize, M::Scalar>, ModuleError> {
    let (m, idx) = space.decode(flat);
    let mut out = SparseVec::new();
    for &(i, j, c) in x {
        let c = M::Scalar::from_i64(c);
        for (&m2, a) in module.act(i, j, m)?.iter() {
            out.add_term(space.index(m2, &idx), &a.times(&c));
        }
        for k in 0..idx.len() {
            if idx[k] == j {
                let mut moved = idx.clone();
                moved[k] = i;
                out.add_term(space.index(m, &moved), &c);
            }
        }
    }
    Ok(out)
}

pub fn mu_invariants<M: GlModule>(
    module: &M,
    n: usize,
    pair: SymmetricPair,
    mu: &M::Scalar,
) -> Result<InvariantSubspace<M::Scalar>, FunctorError> {
    if module.gl_rank() != pair.n() {
        return Err(FunctorError::Invalid(format!(
            "module is for gl_{}, pair needs gl_{}",
            module.gl_rank(),
            pair.n()
        )));
    }
    let space = TensorSpace::new(module.dim(), n, pair.n());
    let dim = space.dim();
    if dim > MAX_AMBIENT_DIM {
        return Err(FunctorError::TooLarge { dim, limit: MAX_AMBIENT_DIM });
    }
    let mut rows: BTreeMap<(usize, usize), SparseVec<usize, M::Scalar>> = BTreeMap::new();
    let mut excluded = BTreeSet::new();
    for (xi, x) in pair.k0_basis().iter().enumerate() {
        let shift = mu.times(&M::Scalar::from_i64(pair.chi(x)));
        for col in 0..dim {
            match total_action(module, &space, x, col) {
                Ok(mut img) => {
                    img.add_term(col, &shift.negated());
                    for (&row, c) in img.iter() {
                        rows.entry((xi, row)).or_default().add_term(col, c);
                    }
                }
                Err(ModuleError::OutOfWindow { .. }) => {
                    excluded.insert(col);
                }
                Err(e) => return Err(e.into()),
            }
        }
    }
    let mut eqs: Vec<SparseVec<usize, M::Scalar>> = rows.into_values().filter(|r| !r.is_zero()).collect();
    eqs.extend(excluded.iter().map(|&c| SparseVec::unit(c)));
    let subspace = kernel(&eqs, dim);
    let ambient_labels = (0..dim).map(|f| space.label(f, |m| module.basis_label(m))).collect();
    Ok(InvariantSubspace {
        space,
        pair,
        mu: mu.clone(),
        subspace,
        excluded: excluded.into_iter().collect(),
        ambient_labels,
    })
}

/// Nonzero terms of ỹ_k = −Σ_{i|j} E_ij ⊗ (E_ji)_k on the V-index I: each
/// (i, j, I') contributes −(E_ij·m) ⊗ e_{I'}.
pub(crate) fn new_y_terms(pair: SymmetricPair, k: usize, idx: &[usize]) -> Vec<(usize, usize, Vec<usize>)> {
    let i = idx[k];
    (0..pair.n())
        .filter(|&j| !pair.same_block(i, j))
        .map(|j| {
            let mut moved = idx.to_vec();
            moved[k] = j;
            (i, j, moved)
        })
        .collect()
}

/// Image of a basis vector under an ambient operator; None when it escapes.
type AmbientOp<'a, S> = Box<dyn Fn(usize) -> Option<SparseVec<usize, S>> + 'a>;

fn signed_index_map<S: Scalar>(space: &TensorSpace, w: &SignedPermutation, p: usize) -> AmbientOp<'static, S> {
    let space = space.clone();
    let w = w.clone();
    Box::new(move |flat| {
        let (m, idx) = space.decode(flat);
        let (moved, sign) = w.act_on_tensor_index(&idx, p);
        Some(SparseVec::from_entries([(space.index(m, &moved), S::from_i64(i64::from(sign)))]))
    })
}

fn restrict<S: Scalar>(
    inv: &InvariantSubspace<S>,
    name: &str,
    op: &AmbientOp<'_, S>,
) -> Result<SparseOperator<S>, FunctorError> {
    let mut columns = Vec::with_capacity(inv.dim());
    for (b, v) in inv.basis().iter().enumerate() {
        let mut image = SparseVec::new();
        let mut escaped = false;
        for (&c, a) in v.iter() {
            match op(c) {
                Some(img) => image.add_scaled(a, &img),
                None => {
                    escaped = true;
                    break;
                }
            }
        }
        if escaped {
            columns.push(None);
            continue;
        }
        match inv.subspace.coordinates(&image) {
            Ok(coords) => columns.push(Some(coords)),
            Err(_) => return Err(FunctorError::NotPreserved { operator: name.to_string(), vector: b }),
        }
    }
    Ok(SparseOperator::from_columns(inv.dim(), columns))
}

/// A representation restricted to an invariant subspace, with the parameters
/// it is predicted to satisfy.
#[derive(Clone, Debug)]
pub struct FunctorOutput<S> {
    pub invariants: InvariantSubspace<S>,
    pub rep: OperatorRep<S>,
    pub params: Params<S>,
    pub law: String,
    pub n: usize,
}

impl<S: Scalar> FunctorOutput<S> {
    pub fn dim(&self) -> usize {
        self.invariants.dim()
    }

    /// Unit vectors of the invariant basis.
    pub fn domain(&self) -> Vec<DomainVector<SparseVec<usize, S>>> {
        (0..self.dim())
            .map(|b| DomainVector { label: self.rep.labels[b].clone(), vector: SparseVec::unit(b) })
            .collect()
    }

    /// The Drinfeld-presentation dAHA suite with the predicted parameters.
    pub fn verify(&self) -> Result<VerificationReport, FunctorError> {
        let rels = relation_set(Presentation::Drinfeld, self.n, &self.params);
        Ok(verify(&self.rep, &rels, &self.domain())?)
    }

    pub fn to_json(&self, report: Option<&VerificationReport>) -> Value {
        let basis: Vec<Value> = self
            .invariants
            .basis()
            .iter()
            .map(|v| v.iter().map(|(k, c)| json!([k, c.to_export_string()])).collect())
            .collect();
        let mut ops = serde_json::Map::new();
        let mut undefined = serde_json::Map::new();
        for (g, op) in &self.rep.operators {
            let triples: Vec<Value> = op
                .triples()
                .into_iter()
                .map(|(r, c, s)| json!([r, c, s.to_export_string()]))
                .collect();
            ops.insert(g.to_string(), Value::Array(triples));
            let missing: Vec<usize> = (0..op.cols()).filter(|&c| !op.is_defined(c)).collect();
            if !missing.is_empty() {
                undefined.insert(g.to_string(), json!(missing));
            }
        }
        let params: serde_json::Map<String, Value> = self
            .params
            .entries()
            .into_iter()
            .map(|(k, v)| (k.to_string(), Value::String(v.to_export_string())))
            .collect();
        let mut out = json!({
            "algebra": self.params.algebra_tag(),
            "dim": self.dim(),
            "ambient_dim": self.invariants.space.dim(),
            "n": self.n,
            "p": self.invariants.pair.p,
            "q": self.invariants.pair.q,
            "mu": self.invariants.mu.to_export_string(),
            "excluded": self.invariants.excluded.len(),
            "basis": basis,
            "basis_labels": self.rep.labels,
            "ops": ops,
            "undefined_columns": undefined,
            "params": params,
            "law": self.law,
        });
        if let Some(r) = report {
            out["report"] = serde_json::to_value(r).expect("report serializes");
        }
        out
    }
}

pub const DAHA_LAW: &str = "kappa1 = 1, kappa2 = p - q - mu*N";

/// F_{n,p,μ}(M): S_ij and γ_k act on the V factors, ỹ_k by the new-y formula.
pub fn build_daha<M: GlModule>(
    module: &M,
    n: usize,
    pair: SymmetricPair,
    mu: &M::Scalar,
) -> Result<FunctorOutput<M::Scalar>, FunctorError> {
    let inv = mu_invariants(module, n, pair, mu)?;
    let space = inv.space.clone();
    let mut operators = BTreeMap::new();
    for i in 0..n {
        for j in i + 1..n {
            let op = signed_index_map(&space, &SignedPermutation::swap(n, i, j), pair.p);
            let g = Generator::Swap(i, j);
            operators.insert(g, restrict(&inv, &g.to_string(), &op)?);
        }
        let op = signed_index_map(&space, &SignedPermutation::gamma(n, i), pair.p);
        let g = Generator::Gamma(i);
        operators.insert(g, restrict(&inv, &g.to_string(), &op)?);
    }
    for k in 0..n {
        let space = space.clone();
        let op: AmbientOp<'_, M::Scalar> = Box::new(move |flat| {
            let (m, idx) = space.decode(flat);
            let mut out = SparseVec::new();
            for (i, j, moved) in new_y_terms(pair, k, &idx) {
                let img = module.act(i, j, m).ok()?;
                for (&m2, c) in img.iter() {
                    out.add_term(space.index(m2, &moved), &c.negated());
                }
            }
            Some(out)
        });
        let g = Generator::YTilde(k);
        operators.insert(g, restrict(&inv, &g.to_string(), &op)?);
    }
    let labels = (0..inv.dim()).map(|b| inv.label(b)).collect();
    let big_n = M::Scalar::from_i64(pair.n() as i64);
    let kappa2 = M::Scalar::from_i64(pair.p as i64 - pair.q as i64).minus(&mu.times(&big_n));
    Ok(FunctorOutput {
        rep: OperatorRep { dim: inv.dim(), operators, labels },
        invariants: inv,
        params: Params::Daha { kappa1: M::Scalar::one(), kappa2 },
        law: DAHA_LAW.to_string(),
        n,
    })
}

/// μ values with nonzero invariants for a module on whose basis h₀ acts
/// diagonally: μ·χ(h₀) must be an h₀-eigenvalue of M ⊗ V^{⊗n}.
pub fn admissible_mus<M: GlModule<Scalar = Rational>>(
    module: &M,
    n: usize,
    pair: SymmetricPair,
) -> Result<Vec<Rational>, FunctorError> {
    let space = TensorSpace::new(module.dim(), n, pair.n());
    if space.dim() > MAX_AMBIENT_DIM {
        return Err(FunctorError::TooLarge { dim: space.dim(), limit: MAX_AMBIENT_DIM });
    }
    let h0 = pair.h0();
    let chi_h0 = Rational::integer(pair.chi(&h0));
    let m_only = TensorSpace::new(module.dim(), 0, pair.n());
    let mut weights = BTreeSet::new();
    for m in 0..module.dim() {
        let img = total_action(module, &m_only, &h0, m)?;
        let w = img.coeff(&m);
        if img.iter().any(|(&k, _)| k != m) {
            return Err(FunctorError::Invalid(format!(
                "h0 is not diagonal on basis vector {}",
                module.basis_label(m)
            )));
        }
        for idx in (0..space.v_dim()).map(|f| space.decode(f).1) {
            let shift: i64 = idx.iter().map(|&i| pair.chi_diag(i)).sum();
            weights.insert(w.clone() + Rational::integer(shift));
        }
    }
    let mut out = Vec::new();
    for w in weights {
        let mu = w.checked_div(&chi_h0)?;
        if mu_invariants(module, n, pair, &mu)?.dim() > 0 {
            out.push(mu);
        }
    }
    Ok(out)
}

/// Window margin on each side of the weights [0, n] that carry invariants.
pub const Y_LAMBDA_MARGIN: i64 = 2;

/// Y_λ = F_{n,1,μ}(F_{λ,ν}) for gl_2 with the tensor-field module on the
/// window [−2n, 3n]. In the module's normalisation (E₁₁ − E₂₂ acts on e_m by
/// 2m + ν) the invariant weights are m = #{k : I_k = 2} exactly when ν = 2μ − n.
pub fn y_lambda<S: Scalar>(n: usize, lambda: &S, mu: &S) -> Result<FunctorOutput<S>, FunctorError> {
    let nu = mu.times(&S::from_i64(2)).minus(&S::from_i64(n as i64));
    let margin = Y_LAMBDA_MARGIN * n as i64;
    let module = Gl2TensorFieldModule::new(lambda.clone(), nu, -margin, n as i64 + margin)?;
    build_daha(&module, n, SymmetricPair::new(1, 1)?, mu)
}

/// Trace of every element of W(BC_n) on the invariant subspace.
pub fn w_character<S: Scalar>(out: &FunctorOutput<S>) -> Result<Vec<(SignedPermutation, S)>, FunctorError> {
    let inv = &out.invariants;
    enumerate_group(out.n)?
        .into_iter()
        .map(|w| {
            let op = signed_index_map(&inv.space, &w, inv.pair.p);
            let m = restrict(inv, "w", &op)?;
            let tr = m.trace().ok_or_else(|| FunctorError::Invalid("W escaped the window".into()))?;
            Ok((w, tr))
        })
        .collect()
}

/// Generator word with the signed cycle type of w: transpositions along each
/// cycle, then γ on every slot whose sign is −1. Traces are class functions
/// and the signed cycle type fixes the class, so this word computes χ(w).
pub fn class_word(w: &SignedPermutation) -> Vec<Generator> {
    let n = w.rank();
    let mut word = Vec::new();
    let mut seen = vec![false; n];
    for start in 0..n {
        if seen[start] {
            continue;
        }
        let mut prev = start;
        seen[start] = true;
        let mut cur = w.perm()[start];
        while cur != start {
            seen[cur] = true;
            word.push(Generator::s(prev, cur));
            prev = cur;
            cur = w.perm()[cur];
        }
    }
    for (k, &s) in w.signs().iter().enumerate() {
        if s == -1 {
            word.push(Generator::Gamma(k));
        }
    }
    word
}

/// Trace of every element of W(BC_n), computed through the representation's
/// own S_ij and γ_k operators on a basis of unit vectors.
pub fn w_character_of<R>(rep: &R, n: usize, dim: usize) -> Result<Vec<(SignedPermutation, R::Scalar)>, FunctorError>
where
    R: Representation<Vector = SparseVec<usize, <R as Representation>::Scalar>>,
{
    enumerate_group(n)?
        .into_iter()
        .map(|w| {
            let word = class_word(&w);
            let mut tr = R::Scalar::zero();
            for b in 0..dim {
                let img = apply_word(rep, &word, &SparseVec::unit(b))?;
                tr = tr.plus(&img.coeff(&b));
            }
            Ok((w, tr))
        })
        .collect()
}

/// Trace of every element of W(BC_n) on V^{⊗n} directly.
pub fn tensor_power_character(n: usize, pair: SymmetricPair) -> Result<Vec<(SignedPermutation, i64)>, FunctorError> {
    let space = TensorSpace::new(1, n, pair.n());
    Ok(enumerate_group(n)?
        .into_iter()
        .map(|w| {
            let tr = (0..space.v_dim())
                .map(|f| {
                    let idx = space.decode(f).1;
                    let (moved, sign) = w.act_on_tensor_index(&idx, pair.p);
                    if moved == idx {
                        i64::from(sign)
                    } else {
                        0
                    }
                })
                .sum();
            (w, tr)
        })
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::RatFunc;
    use crate::glmodules::{CatalogKind, CatalogModule};

    fn q(num: i64, den: i64) -> Rational {
        Rational::new(num, den).unwrap()
    }

    #[test]
    fn trivial_module_with_no_factors() {
        let m = CatalogModule::<Rational>::new(CatalogKind::Trivial, 2).unwrap();
        let inv = mu_invariants(&m, 0, SymmetricPair::new(1, 1).unwrap(), &Rational::zero()).unwrap();
        assert_eq!(inv.dim(), 1);
    }

    #[test]
    fn vector_module_invariants_need_half_integer_mu() {
        let m = CatalogModule::<Rational>::new(CatalogKind::Vector, 2).unwrap();
        let pair = SymmetricPair::new(1, 1).unwrap();
        for (mu, dim) in [(q(1, 2), 1), (q(-1, 2), 1), (q(0, 1), 0), (q(1, 3), 0)] {
            assert_eq!(mu_invariants(&m, 0, pair, &mu).unwrap().dim(), dim, "mu = {mu}");
        }
        assert_eq!(admissible_mus(&m, 0, pair).unwrap(), vec![q(-1, 2), q(1, 2)]);
    }

    #[test]
    fn rank_one_daha_on_vector_module() {
        let m = CatalogModule::<Rational>::new(CatalogKind::Vector, 2).unwrap();
        let pair = SymmetricPair::new(1, 1).unwrap();
        // h0-weights of V ⊗ V are 2, 0, −2 and χ(h0) = 2
        assert_eq!(admissible_mus(&m, 1, pair).unwrap(), vec![q(-1, 1), q(0, 1), q(1, 1)]);
        assert_eq!(mu_invariants(&m, 1, pair, &q(1, 2)).unwrap().dim(), 0);
        for (mu, dim) in [(q(-1, 1), 1), (q(0, 1), 2), (q(1, 1), 1)] {
            let out = build_daha(&m, 1, pair, &mu).unwrap();
            assert_eq!(out.dim(), dim);
            let report = out.verify().unwrap();
            assert!(report.all_ok(), "{report:?}");
            let kappa2 = Rational::integer(0) - Rational::integer(2) * mu;
            assert_eq!(out.params, Params::Daha { kappa1: Rational::one(), kappa2 });
        }
    }

    #[test]
    fn y_lambda_dimension_and_relations_symbolic() {
        let lambda = RatFunc::symbol("lambda");
        let mu = RatFunc::symbol("mu");
        for n in 1..=2 {
            let out = y_lambda(n, &lambda, &mu).unwrap();
            assert_eq!(out.dim(), 1 << n);
            let report = out.verify().unwrap();
            assert!(report.all_ok(), "{:?}", report.failures().collect::<Vec<_>>());
        }
    }

    #[test]
    fn y_lambda_character_matches_tensor_power() {
        let out = y_lambda(2, &q(1, 5), &q(1, 3)).unwrap();
        let pair = SymmetricPair::new(1, 1).unwrap();
        let ours = w_character(&out).unwrap();
        let theirs = tensor_power_character(2, pair).unwrap();
        assert_eq!(ours.len(), 8);
        for ((w1, a), (w2, b)) in ours.iter().zip(&theirs) {
            assert_eq!(w1, w2);
            assert_eq!(*a, Rational::integer(*b));
        }
    }

    #[test]
    fn character_through_operators_agrees() {
        let out = y_lambda(3, &q(2, 7), &q(-1, 4)).unwrap();
        let ambient = w_character(&out).unwrap();
        let via_rep = w_character_of(&out.rep, 3, out.dim()).unwrap();
        assert_eq!(ambient, via_rep);
        assert_eq!(ambient.len(), 48);
    }

    #[test]
    fn wrong_kappa_is_detected() {
        let mut out = y_lambda(2, &q(1, 5), &q(1, 3)).unwrap();
        out.params = Params::Daha { kappa1: Rational::one(), kappa2: Rational::integer(17) };
        let report = out.verify().unwrap();
        assert!(report.any_fail());
    }

    #[test]
    fn export_has_schema_keys() {
        let out = y_lambda(1, &q(1, 5), &q(1, 3)).unwrap();
        let report = out.verify().unwrap();
        let v = out.to_json(Some(&report));
        for key in ["dim", "basis", "ops", "params", "report"] {
            assert!(v.get(key).is_some(), "{key}");
        }
        assert_eq!(v["dim"], 2);
    }
}
