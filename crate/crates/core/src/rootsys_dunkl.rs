//! The non-reduced root system BC_n, trigonometric Dunkl operators and the
//! polynomial representation of the dDAHA on Laurent polynomials in X_1..X_n.
//!
//! Root weights: k(ε_i) = k₂, k(2ε_i) = k₃/2, k(ε_i ± ε_j) = k₁.
//! The Dunkl operator along ε_i is
//! `t ∂_i f − Σ_{α>0} k_α α(ε_i) (1 − X^{−α})^{−1}(1 − S_α) f + ρ(k)(ε_i) f`.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::exact::{Rational, Scalar};
use crate::linalg::{SparseOperator, SparseVec};
use crate::presentations::{
    describe_sparse, ApplyError, DomainVector, Generator, Lin, OperatorRep, RelationExpression,
    Representation,
};
use crate::weylbc::{SignedPermutation, WeylError};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum RootError {
    #[error("rank must be at least 1")]
    ZeroRank,
    #[error("exponent has length {got}, expected {expected}")]
    RankMismatch { expected: usize, got: usize },
    #[error(transparent)]
    Weyl(#[from] WeylError),
}

/// Exponent vector m of the monomial X^m.
pub type Exponent = Vec<i64>;

/// Finite linear combination of monomials X^m.
pub type LaurentPolynomial<S> = SparseVec<Exponent, S>;

/// Orbit type of a positive root; indices are 0-based with i < j.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum RootKind {
    /// ε_i
    Short(usize),
    /// 2ε_i
    Long(usize),
    /// ε_i − ε_j
    Minus(usize, usize),
    /// ε_i + ε_j
    Plus(usize, usize),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Root {
    pub kind: RootKind,
    pub vector: Vec<i64>,
}

impl Root {
    /// ⟨m, α∨⟩ = 2(m·α)/(α·α); always an integer for BC_n.
    pub fn coroot_pairing(&self, m: &[i64]) -> i64 {
        let dot: i64 = m.iter().zip(&self.vector).map(|(a, b)| a * b).sum();
        let norm: i64 = self.vector.iter().map(|a| a * a).sum();
        debug_assert_eq!((2 * dot) % norm, 0);
        2 * dot / norm
    }

    /// α(ε_i)
    pub fn at(&self, i: usize) -> i64 {
        self.vector[i]
    }

    pub fn reflection(&self) -> SignedPermutation {
        SignedPermutation::reflection_of_root(&self.vector)
            .expect("positive roots of BC_n have reflections")
    }

    /// s_α(m) = m − ⟨m, α∨⟩α
    pub fn reflect(&self, m: &[i64]) -> Exponent {
        let c = self.coroot_pairing(m);
        m.iter().zip(&self.vector).map(|(a, b)| a - c * b).collect()
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RootSystemBC {
    n: usize,
    roots: Vec<Root>,
}

impl RootSystemBC {
    pub fn new(n: usize) -> Result<Self, RootError> {
        if n == 0 {
            return Err(RootError::ZeroRank);
        }
        let unit = |i: usize, c: i64| {
            let mut v = vec![0; n];
            v[i] = c;
            v
        };
        let mut roots = Vec::new();
        for i in 0..n {
            roots.push(Root { kind: RootKind::Short(i), vector: unit(i, 1) });
            roots.push(Root { kind: RootKind::Long(i), vector: unit(i, 2) });
        }
        for i in 0..n {
            for j in i + 1..n {
                let mut minus = unit(i, 1);
                minus[j] = -1;
                let mut plus = unit(i, 1);
                plus[j] = 1;
                roots.push(Root { kind: RootKind::Minus(i, j), vector: minus });
                roots.push(Root { kind: RootKind::Plus(i, j), vector: plus });
            }
        }
        Ok(RootSystemBC { n, roots })
    }

    pub fn rank(&self) -> usize {
        self.n
    }

    /// 2n + n(n−1) positive roots.
    pub fn positive_roots(&self) -> &[Root] {
        &self.roots
    }
}

/// Parameters (t, k₁, k₂, k₃) of the polynomial representation.
#[derive(Clone, Debug, PartialEq)]
pub struct DunklParams<S> {
    pub t: S,
    pub k1: S,
    pub k2: S,
    pub k3: S,
}

impl<S: Scalar> DunklParams<S> {
    pub fn weight(&self, kind: RootKind) -> S {
        match kind {
            RootKind::Short(_) => self.k2.clone(),
            RootKind::Long(_) => self.k3.divide(&S::from_i64(2)).expect("2 ≠ 0"),
            RootKind::Minus(..) | RootKind::Plus(..) => self.k1.clone(),
        }
    }

    /// ρ(k)(ε_i) = ½(k₂ + k₃) + k₁(n − 1 − i) for 0-based i.
    pub fn rho(&self, n: usize, i: usize) -> S {
        let half = self.k2.plus(&self.k3).divide(&S::from_i64(2)).expect("2 ≠ 0");
        half.plus(&self.k1.times(&S::from_i64((n - 1 - i) as i64)))
    }

    pub fn to_presentation_params(&self) -> crate::presentations::Params<S> {
        crate::presentations::Params::Ddaha {
            t: self.t.clone(),
            k1: self.k1.clone(),
            k2: self.k2.clone(),
            k3: self.k3.clone(),
        }
    }
}

/// (1 − X^{−α})^{−1}(1 − S_α) f, a Laurent polynomial again.
pub fn divided_difference<S: Scalar>(root: &Root, f: &LaurentPolynomial<S>) -> LaurentPolynomial<S> {
    let mut out = LaurentPolynomial::new();
    for (m, c) in f.iter() {
        let pairing = root.coroot_pairing(m);
        let shifted = |j: i64| -> Exponent {
            m.iter().zip(&root.vector).map(|(a, b)| a + j * b).collect()
        };
        if pairing >= 0 {
            for j in 0..pairing {
                out.add_term(shifted(-j), c);
            }
        } else {
            let neg = c.negated();
            for j in 1..=-pairing {
                out.add_term(shifted(j), &neg);
            }
        }
    }
    out
}

/// Dunkl operator along ε_i (0-based) applied to f.
pub fn dunkl_apply<S: Scalar>(
    system: &RootSystemBC,
    params: &DunklParams<S>,
    i: usize,
    f: &LaurentPolynomial<S>,
) -> LaurentPolynomial<S> {
    let n = system.rank();
    let rho = params.rho(n, i);
    let mut out = LaurentPolynomial::new();
    for (m, c) in f.iter() {
        let diag = params.t.times(&S::from_i64(m[i])).plus(&rho);
        out.add_term(m.clone(), &c.times(&diag));
    }
    for root in system.positive_roots() {
        let a = root.at(i);
        if a == 0 {
            continue;
        }
        let coeff = params.weight(root.kind).times(&S::from_i64(a)).negated();
        out.add_scaled(&coeff, &divided_difference(root, f));
    }
    out
}

pub fn monomial<S: Scalar>(m: &[i64]) -> LaurentPolynomial<S> {
    LaurentPolynomial::unit(m.to_vec())
}

pub fn format_exponent(m: &[i64]) -> String {
    let parts: Vec<String> = m.iter().map(|e| e.to_string()).collect();
    format!("X^({})", parts.join(","))
}

fn map_exponents<S: Scalar>(
    f: &LaurentPolynomial<S>,
    g: impl Fn(&Exponent) -> Exponent,
) -> LaurentPolynomial<S> {
    let mut out = LaurentPolynomial::new();
    for (m, c) in f.iter() {
        out.add_term(g(m), c);
    }
    out
}

/// The polynomial representation on all Laurent polynomials. It has no
/// truncation, so no image ever escapes. ỹ is not assigned; wrap it in
/// `ShiftedRep` for the Drinfeld generators.
#[derive(Clone, Debug)]
pub struct LaurentRep<S> {
    system: RootSystemBC,
    params: DunklParams<S>,
}

impl<S: Scalar> LaurentRep<S> {
    pub fn new(n: usize, params: DunklParams<S>) -> Result<Self, RootError> {
        Ok(LaurentRep { system: RootSystemBC::new(n)?, params })
    }

    pub fn rank(&self) -> usize {
        self.system.rank()
    }

    pub fn params(&self) -> &DunklParams<S> {
        &self.params
    }

    fn check_index(&self, g: Generator, i: usize) -> Result<(), ApplyError> {
        if i < self.rank() {
            Ok(())
        } else {
            Err(ApplyError::Unassigned(g))
        }
    }
}

impl<S: Scalar> Representation for LaurentRep<S> {
    type Scalar = S;
    type Vector = LaurentPolynomial<S>;

    fn apply(&self, g: Generator, f: &Self::Vector) -> Result<Self::Vector, ApplyError> {
        match g {
            Generator::Swap(i, j) => {
                self.check_index(g, j)?;
                Ok(map_exponents(f, |m| {
                    let mut m = m.clone();
                    m.swap(i, j);
                    m
                }))
            }
            Generator::Gamma(i) => {
                self.check_index(g, i)?;
                Ok(map_exponents(f, |m| {
                    let mut m = m.clone();
                    m[i] = -m[i];
                    m
                }))
            }
            Generator::X(i) | Generator::XInv(i) => {
                self.check_index(g, i)?;
                let step = if matches!(g, Generator::X(_)) { 1 } else { -1 };
                Ok(map_exponents(f, |m| {
                    let mut m = m.clone();
                    m[i] += step;
                    m
                }))
            }
            Generator::Y(i) => {
                self.check_index(g, i)?;
                Ok(dunkl_apply(&self.system, &self.params, i, f))
            }
            Generator::YTilde(_) | Generator::Op(..) => Err(ApplyError::Unassigned(g)),
        }
    }

    fn zero_vector(&self) -> Self::Vector {
        LaurentPolynomial::new()
    }

    fn axpy(&self, acc: &mut Self::Vector, c: &S, v: &Self::Vector) {
        acc.add_scaled(c, v);
    }

    fn is_zero(&self, v: &Self::Vector) -> bool {
        v.is_zero()
    }

    fn describe(&self, v: &Self::Vector) -> String {
        describe_sparse(v, |m| format_exponent(m))
    }
}

/// All exponents with max |m_i| ≤ radius, lexicographically.
pub fn exponent_box(n: usize, radius: i64) -> Vec<Exponent> {
    let mut out = vec![Vec::new()];
    for _ in 0..n {
        out = out
            .into_iter()
            .flat_map(|m| {
                (-radius..=radius).map(move |e| {
                    let mut m = m.clone();
                    m.push(e);
                    m
                })
            })
            .collect();
    }
    out
}

/// Largest number of X^{±1} letters in a single word; a monomial of box
/// radius r stays within radius r + depth under every word.
pub fn x_depth<S: Scalar>(relations: &[RelationExpression<S>]) -> i64 {
    relations
        .iter()
        .flat_map(|r| r.lin.terms().map(|(w, _)| w))
        .map(|w| {
            w.iter()
                .filter(|g| matches!(g, Generator::X(_) | Generator::XInv(_)))
                .count() as i64
        })
        .max()
        .unwrap_or(0)
}

/// [y_i, y_j] = 0 for i < j.
pub fn commutativity_relations<S: Scalar>(n: usize) -> Vec<RelationExpression<S>> {
    let mut out = Vec::new();
    for i in 0..n {
        for j in i + 1..n {
            out.push(RelationExpression {
                name: format!("comm.[y,y].i={},j={}", i + 1, j + 1),
                lin: Lin::commutator(&Lin::g(Generator::Y(i)), &Lin::g(Generator::Y(j))),
            });
        }
    }
    out
}

/// Monomials of the given box as labelled verification vectors.
pub fn monomial_domain<S: Scalar>(n: usize, radius: i64) -> Vec<DomainVector<LaurentPolynomial<S>>> {
    exponent_box(n, radius)
        .into_iter()
        .map(|m| DomainVector { label: format_exponent(&m), vector: monomial(&m) })
        .collect()
}

/// Window operators on the span of monomials with max |m_i| ≤ radius.
/// S, γ and y preserve the window because every divided difference of X^m
/// lies on the segment from m to s_α(m). X^{±1} columns whose image leaves
/// the window are left undefined.
pub fn polynomial_representation<S: Scalar>(
    n: usize,
    params: &DunklParams<S>,
    radius: i64,
) -> Result<OperatorRep<S>, RootError> {
    let rep = LaurentRep::new(n, params.clone())?;
    let basis = exponent_box(n, radius);
    let index = |m: &Exponent| -> Option<usize> {
        if m.iter().any(|e| e.abs() > radius) {
            return None;
        }
        Some(m.iter().fold(0usize, |acc, e| acc * (2 * radius as usize + 1) + (e + radius) as usize))
    };
    let mut gens = Vec::new();
    for i in 0..n {
        gens.extend([Generator::Gamma(i), Generator::X(i), Generator::XInv(i), Generator::Y(i)]);
        for j in i + 1..n {
            gens.push(Generator::Swap(i, j));
        }
    }
    let mut operators = std::collections::BTreeMap::new();
    for g in gens {
        let columns = basis
            .iter()
            .map(|m| {
                let image = rep.apply(g, &monomial(m)).ok()?;
                let mut col = SparseVec::new();
                for (e, c) in image.iter() {
                    col.add_term(index(e)?, c);
                }
                Some(col)
            })
            .collect();
        operators.insert(g, SparseOperator::from_columns(basis.len(), columns));
    }
    Ok(OperatorRep {
        dim: basis.len(),
        operators,
        labels: basis.iter().map(|m| format_exponent(m)).collect(),
    })
}

/// Unit basis vectors of the window whose radius is at most `inner`.
pub fn window_domain<S: Scalar>(
    n: usize,
    radius: i64,
    inner: i64,
) -> Vec<DomainVector<SparseVec<usize, S>>> {
    exponent_box(n, radius)
        .into_iter()
        .enumerate()
        .filter(|(_, m)| m.iter().all(|e| e.abs() <= inner))
        .map(|(k, m)| DomainVector { label: format_exponent(&m), vector: SparseVec::unit(k) })
        .collect()
}

/// Rational parameter tuples for the fallback check at larger rank.
pub fn sample_params(seed: u64, count: usize) -> Vec<DunklParams<Rational>> {
    use rand::{Rng, SeedableRng};
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
    let mut draw = || {
        let num: i64 = rng.gen_range(-40..=40);
        let den: i64 = rng.gen_range(1..=13);
        Rational::new(num, den).expect("nonzero denominator")
    };
    (0..count)
        .map(|_| DunklParams { t: draw(), k1: draw(), k2: draw(), k3: draw() })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::RatFunc;
    use crate::presentations::{apply_lin, apply_word, Lin};
    use proptest::prelude::*;

    fn symbolic() -> DunklParams<RatFunc> {
        DunklParams {
            t: RatFunc::symbol("t"),
            k1: RatFunc::symbol("k1"),
            k2: RatFunc::symbol("k2"),
            k3: RatFunc::symbol("k3"),
        }
    }

    fn q(s: &str) -> RatFunc {
        s.parse().unwrap()
    }

    #[test]
    fn root_counts() {
        for n in 1..=4 {
            let r = RootSystemBC::new(n).unwrap();
            assert_eq!(r.positive_roots().len(), 2 * n + n * (n - 1));
        }
        assert_eq!(RootSystemBC::new(0), Err(RootError::ZeroRank));
    }

    #[test]
    fn rank_one_dunkl_on_x() {
        let rep = LaurentRep::new(1, symbolic()).unwrap();
        let out = rep.apply(Generator::Y(0), &monomial(&[1])).unwrap();
        let mut expected = LaurentPolynomial::new();
        expected.add_term(vec![1], &q("t - (k2 + k3)/2"));
        expected.add_term(vec![0], &q("-k2"));
        assert_eq!(out, expected);
    }

    #[test]
    fn constants_are_eigenvectors_with_rho() {
        let rep = LaurentRep::new(3, symbolic()).unwrap();
        for i in 0..3 {
            let out = rep.apply(Generator::Y(i), &monomial(&[0, 0, 0])).unwrap();
            let rho = symbolic().rho(3, i);
            assert_eq!(out, monomial(&[0, 0, 0]).scaled(&rho));
        }
        assert_eq!(symbolic().rho(3, 0), q("(k2+k3)/2 + 2*k1"));
    }

    #[test]
    fn gamma_x_gamma_is_x_inverse_on_window() {
        let params = symbolic();
        let rep = polynomial_representation(1, &params, 3).unwrap();
        let lhs = Lin::<RatFunc>::word(&[Generator::Gamma(0), Generator::X(0), Generator::Gamma(0)]);
        let rel = lhs.minus(&Lin::g(Generator::XInv(0)));
        for dv in window_domain::<RatFunc>(1, 3, 2) {
            assert!(apply_lin(&rep, &rel, &dv.vector).unwrap().is_zero());
        }
    }

    #[test]
    fn sy_minus_ys_is_k1_on_window() {
        let params = symbolic();
        let rep = polynomial_representation(2, &params, 2).unwrap();
        let s = Generator::simple(0);
        let rel = Lin::<RatFunc>::word(&[s, Generator::Y(0)])
            .minus(&Lin::word(&[Generator::Y(1), s]))
            .minus(&Lin::identity().scaled(&params.k1));
        for dv in window_domain::<RatFunc>(2, 2, 2) {
            let r = apply_lin(&rep, &rel, &dv.vector).unwrap();
            assert!(r.is_zero(), "{}: {}", dv.label, rep.describe(&r));
        }
    }

    #[test]
    fn window_is_preserved_by_w_and_y() {
        let rep = polynomial_representation(2, &symbolic(), 2).unwrap();
        for (g, op) in &rep.operators {
            let defined = (0..op.cols()).filter(|&c| op.is_defined(c)).count();
            match g {
                Generator::X(_) | Generator::XInv(_) => assert_eq!(defined, 20),
                _ => assert_eq!(defined, 25, "{g}"),
            }
        }
    }

    #[test]
    fn escaped_images_are_reported() {
        let rep = polynomial_representation(1, &symbolic(), 1).unwrap();
        let top = SparseVec::unit(2);
        let err = apply_word(&rep, &[Generator::X(0)], &top).unwrap_err();
        assert!(matches!(err, ApplyError::Escaped(_)));
    }

    fn small_laurent(n: usize) -> impl Strategy<Value = LaurentPolynomial<Rational>> {
        prop::collection::vec((prop::collection::vec(-3i64..=3, n), -5i64..=5), 1..5).prop_map(
            |terms| {
                let mut f = LaurentPolynomial::new();
                for (m, c) in terms {
                    f.add_term(m, &Rational::integer(c));
                }
                f
            },
        )
    }

    fn rational_params() -> impl Strategy<Value = DunklParams<Rational>> {
        let r = || (-9i64..=9, 1i64..=5).prop_map(|(a, b)| Rational::new(a, b).unwrap());
        (r(), r(), r(), r()).prop_map(|(t, k1, k2, k3)| DunklParams { t, k1, k2, k3 })
    }

    proptest! {
        #[test]
        fn divided_difference_inverts_denominator(f in small_laurent(2), which in 0usize..6) {
            let sys = RootSystemBC::new(2).unwrap();
            let root = &sys.positive_roots()[which];
            let dd = divided_difference(root, &f);
            // (1 − X^{−α})·dd = f − S_α f
            let neg: Exponent = root.vector.iter().map(|a| -a).collect();
            let shifted = map_exponents(&dd, |m| m.iter().zip(&neg).map(|(a, b)| a + b).collect());
            let lhs = dd.minus(&shifted);
            let reflected = map_exponents(&f, |m| root.reflect(m));
            prop_assert_eq!(lhs, f.minus(&reflected));
        }

        #[test]
        fn dunkl_operators_commute(f in small_laurent(3), p in rational_params()) {
            let rep = LaurentRep::new(3, p).unwrap();
            for (i, j) in [(0, 1), (0, 2), (1, 2)] {
                let c = Lin::commutator(&Lin::g(Generator::Y(i)), &Lin::g(Generator::Y(j)));
                prop_assert!(apply_lin(&rep, &c, &f).unwrap().is_zero());
            }
        }

        #[test]
        fn reflections_match_weyl_action(m in prop::collection::vec(-4i64..=4, 3), which in 0usize..12) {
            let sys = RootSystemBC::new(3).unwrap();
            let root = &sys.positive_roots()[which];
            prop_assert_eq!(root.reflection().act_on_exponent(&m), root.reflect(&m));
        }
    }
}
