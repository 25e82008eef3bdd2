//! Sparse exact linear algebra: vectors keyed by basis labels, column-stored
//! operators with possibly undefined columns, and kernels by elimination.

use std::collections::BTreeMap;
use std::fmt;

use crate::exact::Scalar;

/// Finitely supported vector; zero coefficients are never stored.
#[derive(Clone, PartialEq, Eq)]
pub struct SparseVec<K: Ord, S> {
    entries: BTreeMap<K, S>,
}

impl<K: Ord, S> Default for SparseVec<K, S> {
    fn default() -> Self {
        SparseVec {
            entries: BTreeMap::new(),
        }
    }
}

impl<K: Ord + Clone, S: Scalar> SparseVec<K, S> {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn unit(k: K) -> Self {
        let mut v = Self::new();
        v.entries.insert(k, S::one());
        v
    }

    pub fn from_entries(it: impl IntoIterator<Item = (K, S)>) -> Self {
        let mut v = Self::new();
        for (k, c) in it {
            v.add_term(k, &c);
        }
        v
    }

    pub fn get(&self, k: &K) -> Option<&S> {
        self.entries.get(k)
    }

    pub fn coeff(&self, k: &K) -> S {
        self.entries.get(k).cloned().unwrap_or_else(S::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn iter(&self) -> impl DoubleEndedIterator<Item = (&K, &S)> {
        self.entries.iter()
    }

    pub fn keys(&self) -> impl Iterator<Item = &K> {
        self.entries.keys()
    }

    pub fn first_key(&self) -> Option<&K> {
        self.entries.keys().next()
    }

    pub fn add_term(&mut self, k: K, c: &S) {
        if c.is_zero() {
            return;
        }
        match self.entries.get_mut(&k) {
            Some(existing) => {
                let sum = existing.plus(c);
                if sum.is_zero() {
                    self.entries.remove(&k);
                } else {
                    *existing = sum;
                }
            }
            None => {
                self.entries.insert(k, c.clone());
            }
        }
    }

    /// `self += c * other`.
    pub fn add_scaled(&mut self, c: &S, other: &Self) {
        if c.is_zero() {
            return;
        }
        let unit = c.is_one();
        for (k, v) in &other.entries {
            let term = if unit { v.clone() } else { c.times(v) };
            self.add_term(k.clone(), &term);
        }
    }

    pub fn plus(&self, other: &Self) -> Self {
        let mut out = self.clone();
        out.add_scaled(&S::one(), other);
        out
    }

    pub fn minus(&self, other: &Self) -> Self {
        let mut out = self.clone();
        out.add_scaled(&S::one().negated(), other);
        out
    }

    pub fn scaled(&self, c: &S) -> Self {
        if c.is_zero() {
            return Self::new();
        }
        SparseVec {
            entries: self
                .entries
                .iter()
                .map(|(k, v)| (k.clone(), v.times(c)))
                .collect(),
        }
    }

    pub fn negated(&self) -> Self {
        SparseVec {
            entries: self
                .entries
                .iter()
                .map(|(k, v)| (k.clone(), v.negated()))
                .collect(),
        }
    }

    pub fn map_keys<L: Ord + Clone>(&self, mut f: impl FnMut(&K) -> L) -> SparseVec<L, S> {
        let mut out = SparseVec::new();
        for (k, v) in &self.entries {
            out.add_term(f(k), v);
        }
        out
    }

    pub fn map_coeffs<T: Scalar>(&self, mut f: impl FnMut(&S) -> T) -> SparseVec<K, T> {
        let mut out = SparseVec::new();
        for (k, v) in &self.entries {
            out.add_term(k.clone(), &f(v));
        }
        out
    }
}

impl<K: Ord + fmt::Debug, S: fmt::Debug> fmt::Debug for SparseVec<K, S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("{")?;
        for (i, (k, v)) in self.entries.iter().enumerate() {
            if i > 0 {
                f.write_str(", ")?;
            }
            write!(f, "{k:?}: {v:?}")?;
        }
        f.write_str("}")
    }
}

/// Linear map stored by columns. A `None` column marks a basis vector whose
/// image is not representable (it left a truncation window).
#[derive(Clone, Debug, PartialEq)]
pub struct SparseOperator<S> {
    rows: usize,
    columns: Vec<Option<SparseVec<usize, S>>>,
}

impl<S: Scalar> SparseOperator<S> {
    pub fn from_columns(rows: usize, columns: Vec<Option<SparseVec<usize, S>>>) -> Self {
        debug_assert!(columns
            .iter()
            .flatten()
            .all(|c| c.keys().all(|&r| r < rows)));
        SparseOperator { rows, columns }
    }

    pub fn identity(n: usize) -> Self {
        Self::from_columns(n, (0..n).map(|i| Some(SparseVec::unit(i))).collect())
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.columns.len()
    }

    pub fn column(&self, j: usize) -> Option<&SparseVec<usize, S>> {
        self.columns.get(j).and_then(|c| c.as_ref())
    }

    pub fn is_defined(&self, j: usize) -> bool {
        self.column(j).is_some()
    }

    /// Image of `v`; `Err(j)` names an undefined column that `v` touches.
    pub fn apply(&self, v: &SparseVec<usize, S>) -> Result<SparseVec<usize, S>, usize> {
        let mut out = SparseVec::new();
        for (&j, c) in v.iter() {
            let col = self.column(j).ok_or(j)?;
            out.add_scaled(c, col);
        }
        Ok(out)
    }

    /// `self ∘ other`; columns of `other` that hit undefined columns of
    /// `self` become undefined.
    pub fn compose(&self, other: &SparseOperator<S>) -> SparseOperator<S> {
        let columns = other
            .columns
            .iter()
            .map(|c| c.as_ref().and_then(|c| self.apply(c).ok()))
            .collect();
        SparseOperator {
            rows: self.rows,
            columns,
        }
    }

    /// Nonzero entries as `(row, col, value)`, column-major.
    pub fn triples(&self) -> Vec<(usize, usize, S)> {
        let mut out = Vec::new();
        for (j, col) in self.columns.iter().enumerate() {
            if let Some(col) = col {
                for (&i, v) in col.iter() {
                    out.push((i, j, v.clone()));
                }
            }
        }
        out
    }

    pub fn trace(&self) -> Option<S> {
        let mut acc = S::zero();
        for j in 0..self.cols() {
            acc = acc.plus(&self.column(j)?.coeff(&j));
        }
        Some(acc)
    }
}

/// Incrementally maintained reduced row echelon form.
#[derive(Clone, Debug)]
pub struct Echelon<S> {
    /// pivot column -> row with a one at the pivot and zeros at every other pivot
    pivots: BTreeMap<usize, SparseVec<usize, S>>,
}

impl<S: Scalar> Default for Echelon<S> {
    fn default() -> Self {
        Echelon {
            pivots: BTreeMap::new(),
        }
    }
}

impl<S: Scalar> Echelon<S> {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn rank(&self) -> usize {
        self.pivots.len()
    }

    pub fn pivot_columns(&self) -> impl Iterator<Item = usize> + '_ {
        self.pivots.keys().copied()
    }

    pub fn reduce(&self, row: &SparseVec<usize, S>) -> SparseVec<usize, S> {
        let mut r = row.clone();
        for (col, prow) in &self.pivots {
            if let Some(c) = r.get(col).cloned() {
                r.add_scaled(&c.negated(), prow);
            }
        }
        r
    }

    /// Adds a row; returns its new pivot column, or `None` when dependent.
    pub fn insert(&mut self, row: &SparseVec<usize, S>) -> Option<usize> {
        let r = self.reduce(row);
        let (&col, lead) = r.iter().next()?;
        let inv = S::one().divide(lead).expect("pivot is nonzero");
        let r = r.scaled(&inv);
        for prow in self.pivots.values_mut() {
            if let Some(c) = prow.get(&col).cloned() {
                prow.add_scaled(&c.negated(), &r);
            }
        }
        self.pivots.insert(col, r);
        Some(col)
    }

    /// Basis of `{x : row·x = 0 for every inserted row}` in `ncols`
    /// unknowns. Each basis vector has a one at its own free column and
    /// zeros at the other free columns.
    pub fn kernel(&self, ncols: usize) -> Subspace<S> {
        let mut vectors = Vec::new();
        let mut free = Vec::new();
        for f in 0..ncols {
            if self.pivots.contains_key(&f) {
                continue;
            }
            let mut v = SparseVec::unit(f);
            for (&p, prow) in &self.pivots {
                if let Some(c) = prow.get(&f) {
                    v.add_term(p, &c.negated());
                }
            }
            vectors.push(v);
            free.push(f);
        }
        Subspace {
            ambient_dim: ncols,
            vectors,
            free,
        }
    }
}

pub fn kernel<S: Scalar>(equations: &[SparseVec<usize, S>], ncols: usize) -> Subspace<S> {
    let mut e = Echelon::new();
    for row in equations {
        e.insert(row);
    }
    e.kernel(ncols)
}

/// Subspace with a basis in "free column" normal form, so coordinates of a
/// member are read off at the free columns.
#[derive(Clone, Debug, PartialEq)]
pub struct Subspace<S> {
    pub ambient_dim: usize,
    pub vectors: Vec<SparseVec<usize, S>>,
    pub free: Vec<usize>,
}

impl<S: Scalar> Subspace<S> {
    pub fn dim(&self) -> usize {
        self.vectors.len()
    }

    /// Coordinates of `w`, or `Err(residual)` when `w` is not in the span.
    pub fn coordinates(
        &self,
        w: &SparseVec<usize, S>,
    ) -> Result<SparseVec<usize, S>, SparseVec<usize, S>> {
        let mut coords = SparseVec::new();
        let mut residual = w.clone();
        for (b, (f, v)) in self.free.iter().zip(&self.vectors).enumerate() {
            if let Some(c) = w.get(f) {
                coords.add_term(b, c);
                residual.add_scaled(&c.negated(), v);
            }
        }
        if residual.is_zero() {
            Ok(coords)
        } else {
            Err(residual)
        }
    }

    pub fn embed(&self, coords: &SparseVec<usize, S>) -> SparseVec<usize, S> {
        let mut out = SparseVec::new();
        for (&b, c) in coords.iter() {
            out.add_scaled(c, &self.vectors[b]);
        }
        out
    }
}
