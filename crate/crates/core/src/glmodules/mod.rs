//! Modules over gl_N: a small catalog of finite-dimensional ones, the gl_2
//! module of tensor fields on a window of weights, tensor spaces
//! M ⊗ V^{⊗n}, and the twisted-function model used by the double functor.
//!
//! Convention: `act(i, j, b)` is E_ij applied to basis vector b, with
//! 0-based i, j. All actions are Lie algebra homomorphisms.

mod chart;
pub mod twisted;

use std::fmt;
use std::str::FromStr;

use thiserror::Error;

use crate::exact::{Rational, Scalar};
use crate::linalg::{SparseOperator, SparseVec};

pub use chart::{Chart, ChartFunc};
pub use twisted::{FuncMatrix, IndependenceCertificate, ModelWindow, TwistedFunctionModel};

/// Catalog modules larger than this are refused.
pub const MAX_MODULE_DIM: usize = 500;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ModuleError {
    #[error("E{i}{j} is not an element of gl_{n}", i = .i + 1, j = .j + 1)]
    IndexOutOfRange { i: usize, j: usize, n: usize },
    #[error("basis index {0} out of range")]
    BasisOutOfRange(usize),
    #[error("E{i}{j}·{label} leaves the window", i = .i + 1, j = .j + 1)]
    OutOfWindow { label: String, i: usize, j: usize },
    #[error("dimension {dim} exceeds the size guard {limit}")]
    TooLarge { dim: usize, limit: usize },
    #[error("invalid module description {0:?}")]
    Invalid(String),
    #[error("need 1 ≤ p, 1 ≤ q and p + q ≤ {limit}, got p = {p}, q = {q}")]
    BadPair { p: usize, q: usize, limit: usize },
    #[error("factor {k} out of range for {factors} factors")]
    FactorOutOfRange { k: usize, factors: usize },
}

/// A gl_N module with a distinguished basis.
pub trait GlModule: Send + Sync {
    type Scalar: Scalar;

    fn gl_rank(&self) -> usize;
    fn dim(&self) -> usize;
    fn basis_label(&self, b: usize) -> String;
    fn act(&self, i: usize, j: usize, b: usize) -> Result<SparseVec<usize, Self::Scalar>, ModuleError>;

    fn act_vec(
        &self,
        i: usize,
        j: usize,
        v: &SparseVec<usize, Self::Scalar>,
    ) -> Result<SparseVec<usize, Self::Scalar>, ModuleError> {
        let mut out = SparseVec::new();
        for (&b, c) in v.iter() {
            out.add_scaled(c, &self.act(i, j, b)?);
        }
        Ok(out)
    }
}

fn check_indices(i: usize, j: usize, n: usize) -> Result<(), ModuleError> {
    if i < n && j < n {
        Ok(())
    } else {
        Err(ModuleError::IndexOutOfRange { i, j, n })
    }
}

/// Description of a catalog module.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum CatalogKind {
    Trivial,
    Vector,
    Dual,
    Sym(usize),
    Ext(usize),
    Tensor(Vec<CatalogKind>),
}

impl fmt::Display for CatalogKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CatalogKind::Trivial => f.write_str("trivial"),
            CatalogKind::Vector => f.write_str("V"),
            CatalogKind::Dual => f.write_str("V*"),
            CatalogKind::Sym(k) => write!(f, "sym{k}"),
            CatalogKind::Ext(k) => write!(f, "ext{k}"),
            CatalogKind::Tensor(parts) => {
                let inner: Vec<String> = parts.iter().map(|p| p.to_string()).collect();
                write!(f, "tensor({})", inner.join(","))
            }
        }
    }
}

impl FromStr for CatalogKind {
    type Err = ModuleError;

    /// Accepts `trivial`, `V`/`vector`, `V*`/`dual`, `sym<k>`, `ext<k>`,
    /// `tensor(a,b,…)` and the shorthand `VxV`.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let bad = || ModuleError::Invalid(s.to_string());
        let s = s.trim();
        if let Some(inner) = s.strip_prefix("tensor(").and_then(|r| r.strip_suffix(')')) {
            let mut parts = Vec::new();
            let mut depth = 0usize;
            let mut start = 0usize;
            for (k, ch) in inner.char_indices() {
                match ch {
                    '(' => depth += 1,
                    ')' => depth = depth.checked_sub(1).ok_or_else(bad)?,
                    ',' if depth == 0 => {
                        parts.push(inner[start..k].parse()?);
                        start = k + 1;
                    }
                    _ => {}
                }
            }
            parts.push(inner[start..].parse()?);
            return Ok(CatalogKind::Tensor(parts));
        }
        if s.contains('x') && !s.starts_with("ext") {
            let parts: Result<Vec<_>, _> = s.split('x').map(str::parse).collect();
            return Ok(CatalogKind::Tensor(parts?));
        }
        let lower = s.to_ascii_lowercase();
        let degree = |rest: &str| -> Result<usize, ModuleError> { rest.parse().map_err(|_| bad()) };
        match lower.as_str() {
            "trivial" | "c" => Ok(CatalogKind::Trivial),
            "v" | "vector" => Ok(CatalogKind::Vector),
            "v*" | "dual" => Ok(CatalogKind::Dual),
            _ => {
                if let Some(rest) = lower.strip_prefix("sym") {
                    Ok(CatalogKind::Sym(degree(rest)?))
                } else if let Some(rest) = lower.strip_prefix("ext") {
                    Ok(CatalogKind::Ext(degree(rest)?))
                } else {
                    Err(bad())
                }
            }
        }
    }
}

/// Integer structure constants of a catalog module: `ops[i*N + j]` holds
/// the columns of E_ij.
#[derive(Clone, Debug)]
struct IntModule {
    labels: Vec<String>,
    ops: Vec<Vec<Vec<(usize, i64)>>>,
}

fn multisets(n: usize, k: usize) -> Vec<Vec<usize>> {
    if k == 0 {
        return vec![Vec::new()];
    }
    let mut out = Vec::new();
    for rest in multisets(n, k - 1) {
        let lo = rest.last().copied().unwrap_or(0);
        for a in lo..n {
            let mut m = rest.clone();
            m.push(a);
            out.push(m);
        }
    }
    out
}

fn subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
    multisets(n, k)
        .into_iter()
        .filter(|s| s.windows(2).all(|w| w[0] < w[1]))
        .collect()
}

fn binomial(n: usize, k: usize) -> usize {
    (0..k).fold(1usize, |acc, i| acc.saturating_mul(n - i) / (i + 1))
}

fn predicted_dim(kind: &CatalogKind, n: usize) -> usize {
    match kind {
        CatalogKind::Trivial => 1,
        CatalogKind::Vector | CatalogKind::Dual => n,
        CatalogKind::Sym(k) => binomial(n + k - 1, *k),
        CatalogKind::Ext(k) if *k > n => 0,
        CatalogKind::Ext(k) => binomial(n, *k),
        CatalogKind::Tensor(parts) => parts
            .iter()
            .fold(1usize, |acc, p| acc.saturating_mul(predicted_dim(p, n))),
    }
}

fn word_label(w: &[usize], sep: &str) -> String {
    if w.is_empty() {
        return "1".to_string();
    }
    w.iter().map(|a| format!("e{}", a + 1)).collect::<Vec<_>>().join(sep)
}

fn build_int(kind: &CatalogKind, n: usize) -> IntModule {
    let gens = |f: &dyn Fn(usize, usize, usize) -> Vec<(usize, i64)>, dim: usize| {
        (0..n * n)
            .map(|ij| (0..dim).map(|b| f(ij / n, ij % n, b)).collect())
            .collect::<Vec<Vec<Vec<(usize, i64)>>>>()
    };
    match kind {
        CatalogKind::Trivial => IntModule {
            labels: vec!["1".into()],
            ops: gens(&|_, _, _| Vec::new(), 1),
        },
        CatalogKind::Vector => IntModule {
            labels: (0..n).map(|a| format!("e{}", a + 1)).collect(),
            ops: gens(&|i, j, b| if b == j { vec![(i, 1)] } else { Vec::new() }, n),
        },
        CatalogKind::Dual => IntModule {
            labels: (0..n).map(|a| format!("e{}*", a + 1)).collect(),
            ops: gens(&|i, j, b| if b == i { vec![(j, -1)] } else { Vec::new() }, n),
        },
        CatalogKind::Sym(k) => {
            let basis = multisets(n, *k);
            let find = |w: &[usize]| basis.iter().position(|b| b.as_slice() == w).unwrap();
            let act = |i: usize, j: usize, b: usize| {
                let mut out: Vec<(usize, i64)> = Vec::new();
                for pos in 0..*k {
                    if basis[b][pos] == j {
                        let mut w = basis[b].clone();
                        w[pos] = i;
                        w.sort_unstable();
                        out.push((find(&w), 1));
                    }
                }
                out
            };
            IntModule {
                labels: basis.iter().map(|w| word_label(w, "·")).collect(),
                ops: gens(&act, basis.len()),
            }
        }
        CatalogKind::Ext(k) => {
            let basis = subsets(n, *k);
            let find = |w: &[usize]| basis.iter().position(|b| b.as_slice() == w).unwrap();
            let act = |i: usize, j: usize, b: usize| {
                let mut out: Vec<(usize, i64)> = Vec::new();
                let w = &basis[b];
                if let Some(pos) = w.iter().position(|&a| a == j) {
                    if i == j {
                        out.push((b, 1));
                    } else if !w.contains(&i) {
                        let mut v = w.clone();
                        v[pos] = i;
                        // sign of the sorting permutation
                        let inversions = (0..v.len())
                            .flat_map(|a| (a + 1..v.len()).map(move |c| (a, c)))
                            .filter(|&(a, c)| v[a] > v[c])
                            .count();
                        v.sort_unstable();
                        out.push((find(&v), if inversions % 2 == 0 { 1 } else { -1 }));
                    }
                }
                out
            };
            IntModule {
                labels: basis.iter().map(|w| word_label(w, "∧")).collect(),
                ops: gens(&act, basis.len()),
            }
        }
        CatalogKind::Tensor(parts) => {
            let mut acc = build_int(&CatalogKind::Trivial, n);
            for part in parts {
                let right = build_int(part, n);
                let (dl, dr) = (acc.labels.len(), right.labels.len());
                let mut labels = Vec::with_capacity(dl * dr);
                for a in &acc.labels {
                    for b in &right.labels {
                        labels.push(if a == "1" { b.clone() } else { format!("{a}⊗{b}") });
                    }
                }
                let ops = (0..n * n)
                    .map(|ij| {
                        (0..dl * dr)
                            .map(|col| {
                                let (a, b) = (col / dr, col % dr);
                                let mut out = Vec::new();
                                for &(a2, c) in &acc.ops[ij][a] {
                                    out.push((a2 * dr + b, c));
                                }
                                for &(b2, c) in &right.ops[ij][b] {
                                    out.push((a * dr + b2, c));
                                }
                                out
                            })
                            .collect()
                    })
                    .collect();
                acc = IntModule { labels, ops };
            }
            acc
        }
    }
}

/// Finite-dimensional catalog module with precomputed E_ij matrices.
#[derive(Clone, Debug)]
pub struct CatalogModule<S> {
    kind: CatalogKind,
    n: usize,
    labels: Vec<String>,
    ops: Vec<SparseOperator<S>>,
}

impl<S: Scalar> CatalogModule<S> {
    pub fn new(kind: CatalogKind, n: usize) -> Result<Self, ModuleError> {
        if n == 0 {
            return Err(ModuleError::Invalid(format!("{kind} over gl_0")));
        }
        let dim = predicted_dim(&kind, n);
        if dim > MAX_MODULE_DIM {
            return Err(ModuleError::TooLarge { dim, limit: MAX_MODULE_DIM });
        }
        let int = build_int(&kind, n);
        let ops = int
            .ops
            .iter()
            .map(|cols| {
                let columns = cols
                    .iter()
                    .map(|col| {
                        let mut v = SparseVec::new();
                        for &(r, c) in col {
                            v.add_term(r, &S::from_i64(c));
                        }
                        Some(v)
                    })
                    .collect();
                SparseOperator::from_columns(int.labels.len(), columns)
            })
            .collect();
        Ok(CatalogModule { kind, n, labels: int.labels, ops })
    }

    pub fn kind(&self) -> &CatalogKind {
        &self.kind
    }

    pub fn matrix(&self, i: usize, j: usize) -> &SparseOperator<S> {
        &self.ops[i * self.n + j]
    }
}

impl<S: Scalar> GlModule for CatalogModule<S> {
    type Scalar = S;

    fn gl_rank(&self) -> usize {
        self.n
    }

    fn dim(&self) -> usize {
        self.labels.len()
    }

    fn basis_label(&self, b: usize) -> String {
        self.labels.get(b).cloned().unwrap_or_else(|| format!("#{b}"))
    }

    fn act(&self, i: usize, j: usize, b: usize) -> Result<SparseVec<usize, S>, ModuleError> {
        check_indices(i, j, self.n)?;
        self.ops[i * self.n + j]
            .column(b)
            .cloned()
            .ok_or(ModuleError::BasisOutOfRange(b))
    }
}

/// gl_2 acting on the tensor fields z^{m+ν/2}(dz/z)^λ for m in a window.
/// With u = m + ν/2:
/// E11 e_m = u e_m, E22 e_m = −u e_m, E12 e_m = −(u+λ) e_{m+1}, E21 e_m = (u−λ) e_{m−1}.
#[derive(Clone, Debug)]
pub struct Gl2TensorFieldModule<S> {
    pub lambda: S,
    pub nu: S,
    pub m_min: i64,
    pub m_max: i64,
}

impl<S: Scalar> Gl2TensorFieldModule<S> {
    pub fn new(lambda: S, nu: S, m_min: i64, m_max: i64) -> Result<Self, ModuleError> {
        if m_min > m_max {
            return Err(ModuleError::Invalid(format!("empty window [{m_min}, {m_max}]")));
        }
        Ok(Gl2TensorFieldModule { lambda, nu, m_min, m_max })
    }

    pub fn index_of(&self, m: i64) -> Option<usize> {
        (self.m_min..=self.m_max).contains(&m).then(|| (m - self.m_min) as usize)
    }

    pub fn weight_of(&self, b: usize) -> i64 {
        self.m_min + b as i64
    }

    fn u(&self, m: i64) -> S {
        S::from_i64(m).plus(&self.nu.divide(&S::from_i64(2)).expect("2 ≠ 0"))
    }
}

impl<S: Scalar> GlModule for Gl2TensorFieldModule<S> {
    type Scalar = S;

    fn gl_rank(&self) -> usize {
        2
    }

    fn dim(&self) -> usize {
        (self.m_max - self.m_min + 1) as usize
    }

    fn basis_label(&self, b: usize) -> String {
        format!("e[{}]", self.weight_of(b))
    }

    fn act(&self, i: usize, j: usize, b: usize) -> Result<SparseVec<usize, S>, ModuleError> {
        check_indices(i, j, 2)?;
        if b >= self.dim() {
            return Err(ModuleError::BasisOutOfRange(b));
        }
        let m = self.weight_of(b);
        let u = self.u(m);
        let (target, coeff) = match (i, j) {
            (0, 0) => (m, u),
            (1, 1) => (m, u.negated()),
            (0, 1) => (m + 1, u.plus(&self.lambda).negated()),
            _ => (m - 1, u.minus(&self.lambda)),
        };
        if coeff.is_zero() {
            return Ok(SparseVec::new());
        }
        let idx = self.index_of(target).ok_or_else(|| ModuleError::OutOfWindow {
            label: self.basis_label(b),
            i,
            j,
        })?;
        Ok(SparseVec::from_entries([(idx, coeff)]))
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct BracketViolation {
    pub indices: [usize; 4],
    pub basis: String,
    pub residual: String,
}

/// Outcome of the exhaustive bracket-law check.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BracketReport {
    pub checked: usize,
    /// Basis vectors skipped because some image left the window.
    pub skipped: usize,
}

/// [E_ij, E_kl] = δ_jk E_il − δ_li E_kj on every basis vector whose images
/// stay inside the module.
pub fn bracket_law_check<M: GlModule>(module: &M) -> Result<BracketReport, BracketViolation> {
    let n = module.gl_rank();
    let mut report = BracketReport { checked: 0, skipped: 0 };
    for b in 0..module.dim() {
        let e = SparseVec::unit(b);
        let mut skipped = false;
        'quad: for i in 0..n {
            for j in 0..n {
                for k in 0..n {
                    for l in 0..n {
                        let run = || -> Result<SparseVec<usize, M::Scalar>, ModuleError> {
                            let a = module.act_vec(i, j, &module.act_vec(k, l, &e)?)?;
                            let b2 = module.act_vec(k, l, &module.act_vec(i, j, &e)?)?;
                            let mut r = a.minus(&b2);
                            if j == k {
                                r = r.minus(&module.act_vec(i, l, &e)?);
                            }
                            if l == i {
                                r = r.plus(&module.act_vec(k, j, &e)?);
                            }
                            Ok(r)
                        };
                        match run() {
                            Ok(r) if r.is_zero() => {}
                            Ok(r) => {
                                return Err(BracketViolation {
                                    indices: [i, j, k, l],
                                    basis: module.basis_label(b),
                                    residual: format!("{r:?}"),
                                })
                            }
                            Err(_) => {
                                skipped = true;
                                break 'quad;
                            }
                        }
                    }
                }
            }
        }
        if skipped {
            report.skipped += 1;
        } else {
            report.checked += 1;
        }
    }
    Ok(report)
}

/// gl_N element with integer entries, stored as (row, col, value).
pub type GlElement = Vec<(usize, usize, i64)>;

/// Data of the pair (GL_N, GL_p × GL_q).
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SymmetricPair {
    pub p: usize,
    pub q: usize,
}

impl SymmetricPair {
    pub fn new(p: usize, q: usize) -> Result<Self, ModuleError> {
        if p == 0 || q == 0 {
            return Err(ModuleError::BadPair { p, q, limit: usize::MAX });
        }
        Ok(SymmetricPair { p, q })
    }

    pub fn n(&self) -> usize {
        self.p + self.q
    }

    pub fn block(&self, i: usize) -> usize {
        usize::from(i >= self.p)
    }

    pub fn same_block(&self, i: usize, j: usize) -> bool {
        self.block(i) == self.block(j)
    }

    /// Diagonal entry of J = diag(I_p, −I_q).
    pub fn j_sign(&self, i: usize) -> i64 {
        if i < self.p {
            1
        } else {
            -1
        }
    }

    /// χ(E_ii): q on the first block, −p on the second.
    pub fn chi_diag(&self, i: usize) -> i64 {
        if i < self.p {
            self.q as i64
        } else {
            -(self.p as i64)
        }
    }

    pub fn chi(&self, x: &GlElement) -> i64 {
        x.iter()
            .filter(|(i, j, _)| i == j)
            .map(|&(i, _, c)| c * self.chi_diag(i))
            .sum()
    }

    /// h₀ = diag(q I_p, −p I_q), with χ(h₀) = pqN.
    pub fn h0(&self) -> GlElement {
        (0..self.n()).map(|i| (i, i, self.chi_diag(i))).collect()
    }

    /// Basis of 𝔨₀ = (gl_p ⊕ gl_q) ∩ sl_N: in-block off-diagonal units,
    /// in-block differences E_ii − E_{i+1,i+1}, and h₀.
    pub fn k0_basis(&self) -> Vec<GlElement> {
        let n = self.n();
        let mut out = Vec::new();
        for i in 0..n {
            for j in 0..n {
                if i != j && self.same_block(i, j) {
                    out.push(vec![(i, j, 1)]);
                }
            }
        }
        for i in 0..n - 1 {
            if self.same_block(i, i + 1) {
                out.push(vec![(i, i, 1), (i + 1, i + 1, -1)]);
            }
        }
        out.push(self.h0());
        out
    }
}

/// M ⊗ V^{⊗n} with M as factor 0; flat index m·N^n + Σ_k I_k N^{n−1−k}.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TensorSpace {
    pub m_dim: usize,
    pub n_factors: usize,
    pub big_n: usize,
}

impl TensorSpace {
    pub fn new(m_dim: usize, n_factors: usize, big_n: usize) -> Self {
        TensorSpace { m_dim, n_factors, big_n }
    }

    pub fn v_dim(&self) -> usize {
        self.big_n.pow(self.n_factors as u32)
    }

    pub fn dim(&self) -> usize {
        self.m_dim * self.v_dim()
    }

    pub fn factor_dims(&self) -> Vec<usize> {
        let mut d = vec![self.m_dim];
        d.extend(std::iter::repeat_n(self.big_n, self.n_factors));
        d
    }

    pub fn index(&self, m: usize, idx: &[usize]) -> usize {
        idx.iter().fold(m, |acc, &i| acc * self.big_n + i)
    }

    pub fn decode(&self, mut flat: usize) -> (usize, Vec<usize>) {
        let mut idx = vec![0; self.n_factors];
        for k in (0..self.n_factors).rev() {
            idx[k] = flat % self.big_n;
            flat /= self.big_n;
        }
        (flat, idx)
    }

    pub fn label(&self, flat: usize, m_label: impl Fn(usize) -> String) -> String {
        let (m, idx) = self.decode(flat);
        let mut s = m_label(m);
        for i in idx {
            s.push_str(&format!("⊗v{}", i + 1));
        }
        s
    }
}

/// `op` acting on factor k of a tensor product with the given factor
/// dimensions (row-major), identity elsewhere. Undefined columns of `op`
/// stay undefined.
pub fn place_at_factor<S: Scalar>(
    op: &SparseOperator<S>,
    k: usize,
    dims: &[usize],
) -> Result<SparseOperator<S>, ModuleError> {
    if k >= dims.len() {
        return Err(ModuleError::FactorOutOfRange { k, factors: dims.len() });
    }
    if op.rows() != dims[k] || op.cols() != dims[k] {
        return Err(ModuleError::Invalid(format!(
            "operator of size {}×{} on factor of dimension {}",
            op.rows(),
            op.cols(),
            dims[k]
        )));
    }
    let total: usize = dims.iter().product();
    let stride: usize = dims[k + 1..].iter().product();
    let columns = (0..total)
        .map(|col| {
            let digit = (col / stride) % dims[k];
            let base = col - digit * stride;
            op.column(digit).map(|c| {
                let mut out = SparseVec::new();
                for (&r, v) in c.iter() {
                    out.add_term(base + r * stride, v);
                }
                out
            })
        })
        .collect();
    Ok(SparseOperator::from_columns(total, columns))
}

/// Matrix of a gl_N element on V = C^N.
pub fn vector_matrix<S: Scalar>(x: &GlElement, big_n: usize) -> SparseOperator<S> {
    let mut cols: Vec<SparseVec<usize, S>> = vec![SparseVec::new(); big_n];
    for &(i, j, c) in x {
        cols[j].add_term(i, &S::from_i64(c));
    }
    SparseOperator::from_columns(big_n, cols.into_iter().map(Some).collect())
}

/// Exact rational test value used by small examples.
pub fn rational(num: i64, den: i64) -> Rational {
    Rational::new(num, den).expect("nonzero denominator")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::RatFunc;
    use proptest::prelude::*;

    fn q(s: &str) -> RatFunc {
        s.parse().unwrap()
    }

    #[test]
    fn vector_module_basics() {
        let v = CatalogModule::<Rational>::new(CatalogKind::Vector, 2).unwrap();
        assert_eq!(v.dim(), 2);
        assert_eq!(v.act(0, 0, 0).unwrap(), SparseVec::unit(0));
        assert!(v.act(0, 0, 1).unwrap().is_zero());
        assert!(v.act(2, 0, 0).is_err());
    }

    #[test]
    fn catalog_dimensions() {
        let cases = [
            ("sym2", 2, 3),
            ("sym2", 3, 6),
            ("ext2", 3, 3),
            ("ext3", 2, 0),
            ("tensor(V,V)", 3, 9),
            ("VxV*", 2, 4),
            ("tensor(sym2,V)", 2, 6),
            ("trivial", 3, 1),
        ];
        for (desc, n, dim) in cases {
            let kind: CatalogKind = desc.parse().unwrap();
            let m = CatalogModule::<Rational>::new(kind, n).unwrap();
            assert_eq!(m.dim(), dim, "{desc}");
        }
        assert!("sym".parse::<CatalogKind>().is_err());
        assert!(matches!(
            CatalogModule::<Rational>::new(CatalogKind::Sym(40), 3),
            Err(ModuleError::TooLarge { .. })
        ));
    }

    #[test]
    fn catalog_bracket_law_is_exhaustive() {
        for desc in ["trivial", "V", "V*", "sym2", "sym3", "ext2", "tensor(V,V)", "tensor(V,V*)", "tensor(ext2,V)"] {
            for n in 2..=3 {
                let kind: CatalogKind = desc.parse().unwrap();
                let m = CatalogModule::<Rational>::new(kind, n).unwrap();
                let r = bracket_law_check(&m).unwrap();
                assert_eq!((r.checked, r.skipped), (m.dim(), 0), "{desc} over gl_{n}");
            }
        }
    }

    #[test]
    fn tensor_field_weights_and_brackets() {
        let f = Gl2TensorFieldModule::new(q("lambda"), q("nu"), -3, 3).unwrap();
        let b = f.index_of(1).unwrap();
        let h = f.act_vec(0, 0, &SparseVec::unit(b)).unwrap().minus(&f.act(1, 1, b).unwrap());
        assert_eq!(h, SparseVec::from_entries([(b, q("2 + nu"))]));
        let r = bracket_law_check(&f).unwrap();
        assert_eq!((r.checked, r.skipped), (3, 4));
        let top = f.index_of(3).unwrap();
        assert!(matches!(f.act(0, 1, top), Err(ModuleError::OutOfWindow { .. })));
    }

    #[test]
    fn k0_basis_dimension_and_chi() {
        for (p, qq) in [(1, 1), (1, 2), (2, 1), (2, 2)] {
            let pair = SymmetricPair::new(p, qq).unwrap();
            assert_eq!(pair.k0_basis().len(), p * p + qq * qq - 1);
            let n = pair.n();
            assert_eq!(pair.chi(&pair.h0()), (p * qq * n) as i64);
            let identity: GlElement = (0..n).map(|i| (i, i, 1)).collect();
            assert_eq!(pair.chi(&identity), 0);
        }
    }

    #[test]
    fn placement_examples() {
        let pair = SymmetricPair::new(1, 1).unwrap();
        let e11 = vector_matrix::<Rational>(&vec![(0, 0, 1)], 2);
        let placed = place_at_factor(&e11, 1, &[1, 2]).unwrap();
        assert_eq!(placed.triples(), vec![(0, 0, Rational::one())]);
        let j = vector_matrix::<Rational>(&(0..2).map(|i| (i, i, pair.j_sign(i))).collect(), 2);
        let placed = place_at_factor(&j, 1, &[1, 2]).unwrap();
        assert_eq!(
            placed.triples(),
            vec![(0, 0, Rational::one()), (1, 1, Rational::integer(-1))]
        );
        assert!(place_at_factor(&j, 3, &[1, 2]).is_err());
    }

    proptest! {
        #[test]
        fn placement_commutes_across_factors(a in 0usize..3, b in 0usize..3, c in 0usize..3, d in 0usize..3) {
            let x = vector_matrix::<Rational>(&vec![(a, b, 1)], 3);
            let y = vector_matrix::<Rational>(&vec![(c, d, 1)], 3);
            let dims = [2, 3, 3];
            let px = place_at_factor(&x, 1, &dims).unwrap();
            let py = place_at_factor(&y, 2, &dims).unwrap();
            prop_assert_eq!(px.compose(&py).triples(), py.compose(&px).triples());
        }
    }
}
