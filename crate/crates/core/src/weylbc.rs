//! The hyperoctahedral group W(BC_n) = S_n ⋉ (Z/2Z)^n.
//!
//! Indices are 0-based in the API and 1-based in printed names. An element
//! `g = (perm, signs)` acts on exponent vectors by
//! `(g·m)_i = signs_i · m_{perm⁻¹(i)}`, and on `V^{⊗n}` in the same shape:
//! factor `j` moves to slot `perm(j)` after `J` is applied to every factor
//! whose destination slot carries a minus sign.

use std::collections::BTreeMap;
use std::fmt;

use serde::Serialize;
use thiserror::Error;

use crate::exact::Scalar;

pub const MAX_ENUMERATION_RANK: usize = 8;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum WeylError {
    #[error("rank mismatch: {0} vs {1}")]
    RankMismatch(usize, usize),
    #[error("not a root of BC_{n}: {root:?}")]
    NotARoot { n: usize, root: Vec<i64> },
    #[error("rank {0} exceeds the enumeration guard {MAX_ENUMERATION_RANK}")]
    TooLarge(usize),
    #[error("index {index} out of range for rank {n}")]
    IndexOutOfRange { index: usize, n: usize },
}

#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct SignedPermutation {
    perm: Vec<usize>,
    signs: Vec<i8>,
}

impl SignedPermutation {
    pub fn identity(n: usize) -> Self {
        SignedPermutation {
            perm: (0..n).collect(),
            signs: vec![1; n],
        }
    }

    /// Builds from images and signs; `None` unless `perm` is a bijection and
    /// every sign is ±1.
    pub fn new(perm: Vec<usize>, signs: Vec<i8>) -> Option<Self> {
        let n = perm.len();
        if signs.len() != n || signs.iter().any(|s| *s != 1 && *s != -1) {
            return None;
        }
        let mut seen = vec![false; n];
        for &p in &perm {
            if p >= n || seen[p] {
                return None;
            }
            seen[p] = true;
        }
        Some(SignedPermutation { perm, signs })
    }

    /// Transposition of slots `i` and `j` (the reflection for ε_i − ε_j).
    pub fn swap(n: usize, i: usize, j: usize) -> Self {
        let mut g = Self::identity(n);
        g.perm.swap(i, j);
        g
    }

    /// Sign flip of slot `i` (the reflection for ε_i and 2ε_i).
    pub fn gamma(n: usize, i: usize) -> Self {
        let mut g = Self::identity(n);
        g.signs[i] = -1;
        g
    }

    pub fn rank(&self) -> usize {
        self.perm.len()
    }

    pub fn perm(&self) -> &[usize] {
        &self.perm
    }

    pub fn signs(&self) -> &[i8] {
        &self.signs
    }

    pub fn is_identity(&self) -> bool {
        self.perm.iter().enumerate().all(|(i, &p)| i == p) && self.signs.iter().all(|&s| s == 1)
    }

    /// `g ∘ h`: acting by the result equals acting by `h` and then by `g`.
    pub fn compose(&self, h: &SignedPermutation) -> Result<SignedPermutation, WeylError> {
        if self.rank() != h.rank() {
            return Err(WeylError::RankMismatch(self.rank(), h.rank()));
        }
        let n = self.rank();
        let inv = self.inverse_perm();
        let perm = (0..n).map(|j| self.perm[h.perm[j]]).collect();
        let signs = (0..n).map(|i| self.signs[i] * h.signs[inv[i]]).collect();
        Ok(SignedPermutation { perm, signs })
    }

    pub fn inverse(&self) -> SignedPermutation {
        let n = self.rank();
        let inv = self.inverse_perm();
        // (g⁻¹ m)_i = signs_{perm(i)} m_{perm(i)}
        let signs = (0..n).map(|i| self.signs[self.perm[i]]).collect();
        SignedPermutation { perm: inv, signs }
    }

    fn inverse_perm(&self) -> Vec<usize> {
        let mut inv = vec![0; self.rank()];
        for (j, &p) in self.perm.iter().enumerate() {
            inv[p] = j;
        }
        inv
    }

    pub fn act_on_exponent(&self, m: &[i64]) -> Vec<i64> {
        let inv = self.inverse_perm();
        (0..self.rank())
            .map(|i| self.signs[i] as i64 * m[inv[i]])
            .collect()
    }

    /// Image of the tensor basis vector `e_{idx}` of `V^{⊗n}` with `V = C^{p+q}`:
    /// returns the new index and the sign contributed by the `J` factors.
    pub fn act_on_tensor_index(&self, idx: &[usize], p: usize) -> (Vec<usize>, i8) {
        let mut out = vec![0; self.rank()];
        let mut sign = 1i8;
        for (j, &i) in idx.iter().enumerate() {
            let slot = self.perm[j];
            out[slot] = i;
            if self.signs[slot] == -1 && i >= p {
                sign = -sign;
            }
        }
        (out, sign)
    }

    /// Reflection `S_α` for a root α of BC_n given by integer coordinates.
    pub fn reflection_of_root(alpha: &[i64]) -> Result<SignedPermutation, WeylError> {
        let n = alpha.len();
        let bad = || WeylError::NotARoot {
            n,
            root: alpha.to_vec(),
        };
        let support: Vec<usize> = (0..n).filter(|&i| alpha[i] != 0).collect();
        match support.as_slice() {
            [i] if matches!(alpha[*i].abs(), 1 | 2) => Ok(Self::gamma(n, *i)),
            [i, j] if alpha[*i].abs() == 1 && alpha[*j].abs() == 1 => {
                let s = Self::swap(n, *i, *j);
                if alpha[*i] == alpha[*j] {
                    let g = Self::gamma(n, *i).compose(&Self::gamma(n, *j))?;
                    s.compose(&g)
                } else {
                    Ok(s)
                }
            }
            _ => Err(bad()),
        }
    }
}

/// Printed as the image of the exponent vector `(1, …, n)`.
impl fmt::Display for SignedPermutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let m: Vec<i64> = (1..=self.rank() as i64).collect();
        let img = self.act_on_exponent(&m);
        f.write_str("[")?;
        for (k, v) in img.iter().enumerate() {
            if k > 0 {
                f.write_str(" ")?;
            }
            write!(f, "{v}")?;
        }
        f.write_str("]")
    }
}

impl fmt::Debug for SignedPermutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// All `2^n n!` elements, in a deterministic order.
pub fn enumerate_group(n: usize) -> Result<Vec<SignedPermutation>, WeylError> {
    if n > MAX_ENUMERATION_RANK {
        return Err(WeylError::TooLarge(n));
    }
    let mut perms = Vec::new();
    permutations(&mut (0..n).collect::<Vec<_>>(), 0, &mut perms);
    perms.sort();
    let mut out = Vec::with_capacity(perms.len() << n);
    for perm in perms {
        for mask in 0u32..(1 << n) {
            let signs = (0..n)
                .map(|i| if mask >> i & 1 == 1 { -1 } else { 1 })
                .collect();
            out.push(SignedPermutation {
                perm: perm.clone(),
                signs,
            });
        }
    }
    Ok(out)
}

fn permutations(items: &mut Vec<usize>, k: usize, out: &mut Vec<Vec<usize>>) {
    if k == items.len() {
        out.push(items.clone());
        return;
    }
    for i in k..items.len() {
        items.swap(k, i);
        permutations(items, k + 1, out);
        items.swap(k, i);
    }
}

/// Element of the group algebra `S[W]`.
#[derive(Clone, PartialEq, Debug, Default)]
pub struct GroupAlgebraElement<S> {
    terms: BTreeMap<SignedPermutation, S>,
}

impl<S: Scalar> GroupAlgebraElement<S> {
    pub fn zero() -> Self {
        GroupAlgebraElement {
            terms: BTreeMap::new(),
        }
    }

    pub fn basis(g: SignedPermutation) -> Self {
        Self::term(g, S::one())
    }

    pub fn term(g: SignedPermutation, c: S) -> Self {
        let mut out = Self::zero();
        out.add_term(g, &c);
        out
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&SignedPermutation, &S)> {
        self.terms.iter()
    }

    pub fn add_term(&mut self, g: SignedPermutation, c: &S) {
        if c.is_zero() {
            return;
        }
        let sum = match self.terms.get(&g) {
            Some(old) => old.plus(c),
            None => c.clone(),
        };
        if sum.is_zero() {
            self.terms.remove(&g);
        } else {
            self.terms.insert(g, sum);
        }
    }

    pub fn plus(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (g, c) in &other.terms {
            out.add_term(g.clone(), c);
        }
        out
    }

    pub fn scaled(&self, c: &S) -> Self {
        let mut out = Self::zero();
        for (g, a) in &self.terms {
            out.add_term(g.clone(), &a.times(c));
        }
        out
    }

    pub fn times(&self, other: &Self) -> Result<Self, WeylError> {
        let mut out = Self::zero();
        for (g, a) in &self.terms {
            for (h, b) in &other.terms {
                out.add_term(g.compose(h)?, &a.times(b));
            }
        }
        Ok(out)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::Rational;
    use proptest::prelude::*;

    fn word(n: usize, gens: &[SignedPermutation]) -> SignedPermutation {
        gens.iter()
            .fold(SignedPermutation::identity(n), |acc, g| acc.compose(g).unwrap())
    }

    fn order_is(g: &SignedPermutation, k: usize) -> bool {
        let n = g.rank();
        let mut acc = SignedPermutation::identity(n);
        for step in 1..=k {
            acc = acc.compose(g).unwrap();
            if acc.is_identity() {
                return step == k;
            }
        }
        false
    }

    #[test]
    fn small_products() {
        let s = SignedPermutation::swap(2, 0, 1);
        let g2 = SignedPermutation::gamma(2, 1);
        assert!(s.compose(&s).unwrap().is_identity());
        assert!(g2.compose(&g2).unwrap().is_identity());
        let conj = word(2, &[s.clone(), SignedPermutation::gamma(2, 0), s]);
        assert_eq!(conj, g2);
    }

    #[test]
    fn exponent_actions() {
        let s = SignedPermutation::swap(2, 0, 1);
        let g1 = SignedPermutation::gamma(2, 0);
        assert_eq!(s.act_on_exponent(&[3, 5]), vec![5, 3]);
        assert_eq!(g1.act_on_exponent(&[3, 5]), vec![-3, 5]);
        let r = SignedPermutation::reflection_of_root(&[1, 1]).unwrap();
        assert_eq!(r.act_on_exponent(&[1, 1]), vec![-1, -1]);
        assert_eq!(r.act_on_exponent(&[1, -1]), vec![1, -1]);
    }

    #[test]
    fn reflections_of_roots() {
        assert_eq!(
            SignedPermutation::reflection_of_root(&[1, -1]).unwrap(),
            SignedPermutation::swap(2, 0, 1)
        );
        assert_eq!(
            SignedPermutation::reflection_of_root(&[2, 0]).unwrap(),
            SignedPermutation::gamma(2, 0)
        );
        assert!(SignedPermutation::reflection_of_root(&[1, 2]).is_err());
        assert!(SignedPermutation::reflection_of_root(&[0, 0]).is_err());
    }

    #[test]
    fn group_sizes() {
        assert_eq!(enumerate_group(1).unwrap().len(), 2);
        assert_eq!(enumerate_group(2).unwrap().len(), 8);
        let w3 = enumerate_group(3).unwrap();
        assert_eq!(w3.len(), 48);
        let distinct: std::collections::BTreeSet<_> = w3.iter().collect();
        assert_eq!(distinct.len(), 48);
        assert!(matches!(enumerate_group(9), Err(WeylError::TooLarge(9))));
    }

    #[test]
    fn coxeter_relations_of_type_b() {
        for n in 2..=4 {
            let s: Vec<_> = (0..n - 1).map(|i| SignedPermutation::swap(n, i, i + 1)).collect();
            let gn = SignedPermutation::gamma(n, n - 1);
            assert!(order_is(&gn, 2));
            for i in 0..n - 1 {
                assert!(order_is(&s[i], 2));
                if i + 1 < n - 1 {
                    assert!(order_is(&s[i].compose(&s[i + 1]).unwrap(), 3));
                }
                for j in i + 2..n - 1 {
                    assert_eq!(s[i].compose(&s[j]).unwrap(), s[j].compose(&s[i]).unwrap());
                }
                if i + 1 < n - 1 {
                    assert_eq!(s[i].compose(&gn).unwrap(), gn.compose(&s[i]).unwrap());
                }
            }
            assert!(order_is(&s[n - 2].compose(&gn).unwrap(), 4));
        }
    }

    #[test]
    fn inverse_and_tensor_action() {
        for g in enumerate_group(3).unwrap() {
            assert!(g.compose(&g.inverse()).unwrap().is_identity());
        }
        // γ_1 on e_2 ⊗ e_1 with p = 1: J negates e_2 in slot 1.
        let (idx, sign) = SignedPermutation::gamma(2, 0).act_on_tensor_index(&[1, 0], 1);
        assert_eq!((idx, sign), (vec![1, 0], -1));
        let (idx, sign) = SignedPermutation::swap(2, 0, 1).act_on_tensor_index(&[1, 0], 1);
        assert_eq!((idx, sign), (vec![0, 1], 1));
    }

    #[test]
    fn tensor_action_is_a_homomorphism() {
        let w = enumerate_group(2).unwrap();
        let idxs = [[0, 0], [0, 1], [1, 0], [1, 1], [2, 1]];
        for g in &w {
            for h in &w {
                let gh = g.compose(h).unwrap();
                for idx in &idxs {
                    let (a, sa) = h.act_on_tensor_index(idx, 1);
                    let (b, sb) = g.act_on_tensor_index(&a, 1);
                    assert_eq!(gh.act_on_tensor_index(idx, 1), (b, sa * sb));
                }
            }
        }
    }

    #[test]
    fn group_algebra_is_associative() {
        let w = enumerate_group(2).unwrap();
        let mk = |k: usize| {
            let mut e = GroupAlgebraElement::<Rational>::zero();
            for (i, g) in w.iter().enumerate() {
                e.add_term(g.clone(), &Rational::integer(((i * k) % 5) as i64 - 2));
            }
            e
        };
        let (a, b, c) = (mk(1), mk(2), mk(3));
        let left = a.times(&b).unwrap().times(&c).unwrap();
        let right = a.times(&b.times(&c).unwrap()).unwrap();
        assert_eq!(left, right);
        assert!(a.plus(&a.scaled(&Rational::integer(-1))).is_zero());
    }

    proptest! {
        #[test]
        fn action_law(gi in 0usize..8, hi in 0usize..8, m in proptest::collection::vec(-6i64..6, 2)) {
            let w = enumerate_group(2).unwrap();
            let (g, h) = (&w[gi], &w[hi]);
            prop_assert_eq!(
                g.act_on_exponent(&h.act_on_exponent(&m)),
                g.compose(h).unwrap().act_on_exponent(&m)
            );
        }

        #[test]
        fn reflection_negates_root_and_fixes_hyperplane(i in 0usize..3, j in 0usize..3, kind in 0u8..4, m in proptest::collection::vec(-5i64..5, 3)) {
            prop_assume!(i != j || kind < 2);
            let mut alpha = vec![0i64; 3];
            match kind {
                0 => alpha[i] = 1,
                1 => alpha[i] = 2,
                2 => { alpha[i] = 1; alpha[j] = -1; }
                _ => { alpha[i] = 1; alpha[j] = 1; }
            }
            let r = SignedPermutation::reflection_of_root(&alpha).unwrap();
            prop_assert_eq!(r.act_on_exponent(&alpha), alpha.iter().map(|a| -a).collect::<Vec<_>>());
            let dot: i64 = alpha.iter().zip(&m).map(|(a, b)| a * b).sum();
            let norm: i64 = alpha.iter().map(|a| a * a).sum();
            // s_α(m) = m − 2(m,α)/(α,α) α
            let expected: Vec<i64> = m.iter().zip(&alpha).map(|(x, a)| x - 2 * dot * a / norm).collect();
            prop_assert_eq!(r.act_on_exponent(&m), expected);
        }
    }
}
