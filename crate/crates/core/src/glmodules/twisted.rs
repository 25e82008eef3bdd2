use std::sync::Arc;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::chart::{Chart, ChartFunc};
use super::{ModuleError, SymmetricPair};
use crate::exact::{MultiPoly, Rational, Scalar};
use crate::linalg::{Echelon, SparseVec};

/// Square matrix of chart functions.
pub type FuncMatrix = Vec<Vec<ChartFunc>>;

pub fn mat_mul(a: &FuncMatrix, b: &FuncMatrix) -> FuncMatrix {
    let n = a.len();
    (0..n)
        .map(|i| {
            (0..n)
                .map(|j| {
                    (0..n).fold(ChartFunc::zero(), |acc, k| {
                        if a[i][k].is_zero() || b[k][j].is_zero() {
                            acc
                        } else {
                            acc.add(&a[i][k].mul(&b[k][j]))
                        }
                    })
                })
                .collect()
        })
        .collect()
}

pub fn mat_add(a: &FuncMatrix, b: &FuncMatrix) -> FuncMatrix {
    a.iter()
        .zip(b)
        .map(|(ra, rb)| ra.iter().zip(rb).map(|(x, y)| x.add(y)).collect())
        .collect()
}

pub fn mat_sub(a: &FuncMatrix, b: &FuncMatrix) -> FuncMatrix {
    a.iter()
        .zip(b)
        .map(|(ra, rb)| ra.iter().zip(rb).map(|(x, y)| x.sub(y)).collect())
        .collect()
}

pub fn mat_identity(n: usize) -> FuncMatrix {
    (0..n)
        .map(|i| (0..n).map(|j| ChartFunc::from_i64(i64::from(i == j))).collect())
        .collect()
}

pub fn mat_unit(n: usize, r: usize, s: usize) -> FuncMatrix {
    (0..n)
        .map(|i| (0..n).map(|j| ChartFunc::from_i64(i64::from(i == r && j == s))).collect())
        .collect()
}

pub fn trace(m: &FuncMatrix) -> ChartFunc {
    (0..m.len()).fold(ChartFunc::zero(), |acc, i| acc.add(&m[i][i]))
}

/// Spanning list of window functions with labels.
#[derive(Clone, Debug)]
pub struct ModelWindow {
    pub elements: Vec<ChartFunc>,
    pub labels: Vec<String>,
}

impl ModelWindow {
    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }
}

/// Evidence that a window basis is linearly independent: a nonsingular
/// evaluation matrix at rational points, plus exact verification of every
/// dependency that was used to discard a spanning element.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IndependenceCertificate {
    pub seed: u64,
    pub points: usize,
    pub rank: usize,
    pub discarded: usize,
    pub attempts: usize,
}

/// Twisted functions u·s on the chart of GL_N, N = p + q ≤ 3, where s is a
/// formal section with right 𝔨-weight λχ. Left vector fields act by
/// L_x(u·s) = (D_x u + φ_x u)·s with
/// φ_x = λ(q·tr(A₁₁⁻¹(xA)₁₁) − p·tr(A₂₂⁻¹(xA)₂₂)).
pub struct TwistedFunctionModel {
    pair: SymmetricPair,
    chart: Arc<Chart>,
    a: FuncMatrix,
    ainv: FuncMatrix,
    x: FuncMatrix,
    xinv: FuncMatrix,
    phi: FuncMatrix,
}

pub const MAX_MODEL_RANK: usize = 3;
pub const MAX_WINDOW_DEGREE: usize = 3;

impl TwistedFunctionModel {
    pub fn new(p: usize, q: usize) -> Result<Self, ModuleError> {
        if p == 0 || q == 0 || p + q > MAX_MODEL_RANK {
            return Err(ModuleError::BadPair { p, q, limit: MAX_MODEL_RANK });
        }
        let pair = SymmetricPair::new(p, q)?;
        let chart = Chart::new(p, q);
        let n = p + q;
        let a: FuncMatrix = (0..n)
            .map(|i| (0..n).map(|j| ChartFunc::poly(&chart, MultiPoly::var(chart.var(i, j)))).collect())
            .collect();
        let ainv: FuncMatrix = chart
            .adj()
            .iter()
            .map(|row| row.iter().map(|e| ChartFunc::new(&chart, e.clone(), [1, 0, 0])).collect())
            .collect();
        let jm: FuncMatrix = (0..n)
            .map(|i| (0..n).map(|k| ChartFunc::from_i64(if i == k { pair.j_sign(i) } else { 0 })).collect())
            .collect();
        let x = mat_mul(&mat_mul(&mat_mul(&a, &jm), &ainv), &jm);
        let xinv = mat_mul(&mat_mul(&mat_mul(&jm, &a), &jm), &ainv);
        let x = x.iter().map(|r| r.iter().map(ChartFunc::reduce).collect()).collect();
        let xinv = xinv.iter().map(|r| r.iter().map(ChartFunc::reduce).collect()).collect();
        let lambda = ChartFunc::lambda(&chart);
        let phi = (0..n)
            .map(|r| {
                (0..n)
                    .map(|s| {
                        // (E_rs A)_ij = δ_ri a_sj
                        let mut out = ChartFunc::zero();
                        if r < p {
                            let mut num = MultiPoly::zero();
                            for j in 0..p {
                                num = num.add(&chart.adj11()[j][r].mul(&MultiPoly::var(chart.var(s, j))));
                            }
                            out = out.add(&ChartFunc::new(&chart, num, [0, 1, 0]).scale(&Rational::integer(q as i64)));
                        } else {
                            let mut num = MultiPoly::zero();
                            for j in p..n {
                                num = num.add(&chart.adj22()[j - p][r - p].mul(&MultiPoly::var(chart.var(s, j))));
                            }
                            out = out.sub(&ChartFunc::new(&chart, num, [0, 0, 1]).scale(&Rational::integer(p as i64)));
                        }
                        out.mul(&lambda).reduce()
                    })
                    .collect()
            })
            .collect();
        Ok(TwistedFunctionModel { pair, chart, a, ainv, x, xinv, phi })
    }

    pub fn pair(&self) -> SymmetricPair {
        self.pair
    }

    pub fn n(&self) -> usize {
        self.pair.n()
    }

    pub fn chart(&self) -> &Arc<Chart> {
        &self.chart
    }

    pub fn a(&self) -> &FuncMatrix {
        &self.a
    }

    pub fn a_inverse(&self) -> &FuncMatrix {
        &self.ainv
    }

    /// X = AJA⁻¹J
    pub fn x(&self) -> &FuncMatrix {
        &self.x
    }

    /// X⁻¹ = JAJA⁻¹
    pub fn x_inverse(&self) -> &FuncMatrix {
        &self.xinv
    }

    /// J as a function matrix.
    pub fn j(&self) -> FuncMatrix {
        let n = self.n();
        (0..n)
            .map(|i| (0..n).map(|k| ChartFunc::from_i64(if i == k { self.pair.j_sign(i) } else { 0 })).collect())
            .collect()
    }

    /// X^k for any integer k.
    pub fn x_power(&self, k: i64) -> FuncMatrix {
        let base = if k >= 0 { &self.x } else { &self.xinv };
        let mut out = mat_identity(self.n());
        for _ in 0..k.unsigned_abs() {
            out = mat_mul(&out, base);
            out = out.iter().map(|r| r.iter().map(ChartFunc::reduce).collect()).collect();
        }
        out
    }

    /// T = tr X
    pub fn t(&self) -> ChartFunc {
        trace(&self.x)
    }

    pub fn lambda(&self) -> ChartFunc {
        ChartFunc::lambda(&self.chart)
    }

    pub fn phi(&self, r: usize, s: usize) -> &ChartFunc {
        &self.phi[r][s]
    }

    /// D_rs u, the untwisted left vector field of E_rs.
    pub fn d(&self, r: usize, s: usize, u: &ChartFunc) -> ChartFunc {
        u.derivative(r, s)
    }

    /// L_{E_rs}(u·s) = (D_rs u + φ_rs u)·s, returned as the new coefficient.
    pub fn l(&self, r: usize, s: usize, u: &ChartFunc) -> ChartFunc {
        if u.is_zero() {
            return ChartFunc::zero();
        }
        u.derivative(r, s).add(&self.phi[r][s].mul(u)).reduce()
    }

    /// L_Y = Σ_ab Y_ab L_{E_ab} for a matrix Y of functions.
    pub fn l_matrix(&self, y: &FuncMatrix, u: &ChartFunc) -> ChartFunc {
        let mut out = ChartFunc::zero();
        for (a, row) in y.iter().enumerate() {
            for (b, c) in row.iter().enumerate() {
                if !c.is_zero() {
                    out = out.add(&c.mul(&self.l(a, b, u)));
                }
            }
        }
        out.reduce()
    }

    /// L_x for a constant matrix x.
    pub fn l_const(&self, x: &[(usize, usize, Rational)], u: &ChartFunc) -> ChartFunc {
        x.iter()
            .fold(ChartFunc::zero(), |acc, (a, b, c)| acc.add(&self.l(*a, *b, u).scale(c)))
            .reduce()
    }

    /// χ(M) = q·tr(M₁₁) − p·tr(M₂₂)
    pub fn chi(&self, m: &FuncMatrix) -> ChartFunc {
        (0..self.n()).fold(ChartFunc::zero(), |acc, i| {
            acc.add(&m[i][i].scale(&Rational::integer(self.pair.chi_diag(i))))
        })
    }

    /// Q_rj = J A⁻¹ J E_rj A + A⁻¹ E_rj J A J
    pub fn q_matrix(&self, r: usize, j: usize) -> FuncMatrix {
        let n = self.n();
        let jm = self.j();
        let e = mat_unit(n, r, j);
        let first = mat_mul(&mat_mul(&mat_mul(&mat_mul(&jm, &self.ainv), &jm), &e), &self.a);
        let second = mat_mul(&mat_mul(&mat_mul(&mat_mul(&self.ainv, &e), &jm), &self.a), &jm);
        mat_add(&first, &second)
            .iter()
            .map(|row| row.iter().map(ChartFunc::reduce).collect())
            .collect()
    }

    /// Monomials of degree ≤ d in the entries of X, as a spanning list.
    pub fn window(&self, d: usize) -> Result<ModelWindow, ModuleError> {
        if d > MAX_WINDOW_DEGREE {
            return Err(ModuleError::TooLarge { dim: d, limit: MAX_WINDOW_DEGREE });
        }
        let n = self.n();
        let entries: Vec<(usize, usize)> = (0..n).flat_map(|i| (0..n).map(move |j| (i, j))).collect();
        let mut elements = vec![ChartFunc::one()];
        let mut labels = vec!["1".to_string()];
        let mut frontier: Vec<(usize, ChartFunc, String)> = vec![(0, ChartFunc::one(), String::new())];
        for _ in 0..d {
            let mut next = Vec::new();
            for (start, f, label) in &frontier {
                for (k, &(i, j)) in entries.iter().enumerate().skip(*start) {
                    let g = f.mul(&self.x[i][j]);
                    let name = if label.is_empty() {
                        format!("X{}{}", i + 1, j + 1)
                    } else {
                        format!("{label}*X{}{}", i + 1, j + 1)
                    };
                    elements.push(g.clone());
                    labels.push(name.clone());
                    next.push((k, g, name));
                }
            }
            frontier = next;
        }
        Ok(ModelWindow { elements, labels })
    }

    fn random_point(&self, rng: &mut ChaCha8Rng) -> Vec<Vec<Rational>> {
        let n = self.n();
        loop {
            let pt: Vec<Vec<Rational>> = (0..n)
                .map(|_| {
                    (0..n)
                        .map(|_| Rational::new(rng.gen_range(-30..=30), rng.gen_range(1..=7)).expect("nonzero"))
                        .collect()
                })
                .collect();
            let map = self.chart.point(&pt);
            let nonsingular = (0..3).all(|i| {
                self.chart
                    .factor(i)
                    .evaluate(&map)
                    .map(|v| !v.is_zero())
                    .unwrap_or(false)
            });
            if nonsingular {
                return pt;
            }
        }
    }

    /// Linearly independent sub-list of the window spanning the same space.
    pub fn certify_basis(
        &self,
        window: &ModelWindow,
        seed: u64,
    ) -> Result<(ModelWindow, IndependenceCertificate), ModuleError> {
        const ATTEMPTS: usize = 4;
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut extra = 4;
        for attempt in 1..=ATTEMPTS {
            let npts = window.len() + extra;
            let points: Vec<_> = (0..npts)
                .map(|_| self.chart.point(&self.random_point(&mut rng)))
                .collect();
            let values: Vec<Vec<Rational>> = window
                .elements
                .iter()
                .map(|f| {
                    points
                        .iter()
                        .map(|pt| f.evaluate_rational(pt).expect("no pole at chosen points"))
                        .collect()
                })
                .collect();
            let as_row = |v: &[Rational]| SparseVec::from_entries(v.iter().cloned().enumerate());
            let mut ech = Echelon::new();
            let mut chosen: Vec<usize> = Vec::new();
            let mut dependent: Vec<usize> = Vec::new();
            for (k, v) in values.iter().enumerate() {
                if ech.insert(&as_row(v)).is_some() {
                    chosen.push(k);
                } else {
                    dependent.push(k);
                }
            }
            let verified = dependent.iter().all(|&k| {
                // Σ c_b f_b(pt) + f_k(pt) = 0 at every point, in unknowns c.
                let r = chosen.len();
                let eqs: Vec<SparseVec<usize, Rational>> = (0..npts)
                    .map(|pt| {
                        let mut row: SparseVec<usize, Rational> = SparseVec::new();
                        for (c, &b) in chosen.iter().enumerate() {
                            row.add_term(c, &values[b][pt]);
                        }
                        row.add_term(r, &values[k][pt]);
                        row
                    })
                    .collect();
                let ker = crate::linalg::kernel(&eqs, r + 1);
                let Some(rel) = ker.vectors.iter().find(|v| v.get(&r).is_some()) else {
                    return false;
                };
                let scale = rel.coeff(&r);
                let mut combo = window.elements[k].clone();
                for (c, &b) in chosen.iter().enumerate() {
                    let coeff = rel.coeff(&c).checked_div(&scale).expect("nonzero");
                    if !coeff.is_zero() {
                        combo = combo.add(&window.elements[b].scale(&coeff));
                    }
                }
                combo.is_zero()
            });
            if verified {
                let basis = ModelWindow {
                    elements: chosen.iter().map(|&k| window.elements[k].clone()).collect(),
                    labels: chosen.iter().map(|&k| window.labels[k].clone()).collect(),
                };
                let cert = IndependenceCertificate {
                    seed,
                    points: npts,
                    rank: chosen.len(),
                    discarded: dependent.len(),
                    attempts: attempt,
                };
                return Ok((basis, cert));
            }
            extra *= 2;
        }
        Err(ModuleError::Invalid(format!(
            "window independence not certified after {ATTEMPTS} attempts"
        )))
    }
}
