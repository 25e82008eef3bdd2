use std::collections::HashMap;
use std::fmt;
use std::sync::Arc;

use crate::exact::{ExactError, MultiPoly, RatFunc, Rational, Scalar, Symbol};

/// Polynomial data of the chart det A · det A₁₁ · det A₂₂ ≠ 0 on gl_N,
/// N = p + q, with entries a_ij and the twist parameter λ.
#[derive(Debug)]
pub struct Chart {
    pub p: usize,
    pub q: usize,
    vars: Vec<Vec<Symbol>>,
    lambda: Symbol,
    /// det A, det A₁₁, det A₂₂
    factors: [MultiPoly; 3],
    /// adjugate of A, so A⁻¹ = adj / det A
    adj: Vec<Vec<MultiPoly>>,
    adj11: Vec<Vec<MultiPoly>>,
    adj22: Vec<Vec<MultiPoly>>,
    /// D_rs(f_i) at index [r][s][i]
    dfactors: Vec<Vec<[MultiPoly; 3]>>,
}

fn det(m: &[Vec<MultiPoly>]) -> MultiPoly {
    match m.len() {
        0 => MultiPoly::one(),
        1 => m[0][0].clone(),
        n => {
            let mut acc = MultiPoly::zero();
            for col in 0..n {
                let minor: Vec<Vec<MultiPoly>> = m[1..]
                    .iter()
                    .map(|row| {
                        row.iter()
                            .enumerate()
                            .filter(|&(c, _)| c != col)
                            .map(|(_, v)| v.clone())
                            .collect()
                    })
                    .collect();
                let term = m[0][col].mul(&det(&minor));
                acc = if col % 2 == 0 { acc.add(&term) } else { acc.sub(&term) };
            }
            acc
        }
    }
}

fn adjugate(m: &[Vec<MultiPoly>]) -> Vec<Vec<MultiPoly>> {
    let n = m.len();
    if n == 1 {
        return vec![vec![MultiPoly::one()]];
    }
    (0..n)
        .map(|i| {
            (0..n)
                .map(|j| {
                    // adj_ij = (−1)^{i+j} det(minor without row j, column i)
                    let minor: Vec<Vec<MultiPoly>> = (0..n)
                        .filter(|&r| r != j)
                        .map(|r| (0..n).filter(|&c| c != i).map(|c| m[r][c].clone()).collect())
                        .collect();
                    let d = det(&minor);
                    if (i + j) % 2 == 0 {
                        d
                    } else {
                        d.neg()
                    }
                })
                .collect()
        })
        .collect()
}

impl Chart {
    pub fn new(p: usize, q: usize) -> Arc<Chart> {
        let n = p + q;
        let vars: Vec<Vec<Symbol>> = (0..n)
            .map(|i| (0..n).map(|j| Symbol::matrix_entry(i + 1, j + 1)).collect())
            .collect();
        let a: Vec<Vec<MultiPoly>> = vars
            .iter()
            .map(|row| row.iter().map(|&s| MultiPoly::var(s)).collect())
            .collect();
        let block = |lo: usize, hi: usize| -> Vec<Vec<MultiPoly>> {
            (lo..hi).map(|i| (lo..hi).map(|j| a[i][j].clone()).collect()).collect()
        };
        let (a11, a22) = (block(0, p), block(p, n));
        let factors = [det(&a), det(&a11), det(&a22)];
        let mut chart = Chart {
            p,
            q,
            lambda: Symbol::new("lambda"),
            adj: adjugate(&a),
            adj11: adjugate(&a11),
            adj22: adjugate(&a22),
            vars,
            factors,
            dfactors: Vec::new(),
        };
        let dfactors = (0..n)
            .map(|r| {
                (0..n)
                    .map(|s| {
                        let f = &chart.factors;
                        [chart.d_poly(r, s, &f[0]), chart.d_poly(r, s, &f[1]), chart.d_poly(r, s, &f[2])]
                    })
                    .collect()
            })
            .collect();
        chart.dfactors = dfactors;
        Arc::new(chart)
    }

    pub fn n(&self) -> usize {
        self.p + self.q
    }

    pub fn var(&self, i: usize, j: usize) -> Symbol {
        self.vars[i][j]
    }

    pub fn lambda_symbol(&self) -> Symbol {
        self.lambda
    }

    pub fn factor(&self, i: usize) -> &MultiPoly {
        &self.factors[i]
    }

    pub fn adj(&self) -> &[Vec<MultiPoly>] {
        &self.adj
    }

    pub fn adj11(&self) -> &[Vec<MultiPoly>] {
        &self.adj11
    }

    pub fn adj22(&self) -> &[Vec<MultiPoly>] {
        &self.adj22
    }

    /// D_rs P = Σ_j a_sj ∂P/∂a_rj: the derivation with D_rs(A) = E_rs A.
    pub fn d_poly(&self, r: usize, s: usize, poly: &MultiPoly) -> MultiPoly {
        let mut out = MultiPoly::zero();
        for j in 0..self.n() {
            let dp = poly.derivative(self.vars[r][j]);
            if !dp.is_zero() {
                out = out.add(&dp.mul(&MultiPoly::var(self.vars[s][j])));
            }
        }
        out
    }

    fn power(&self, i: usize, e: u32) -> MultiPoly {
        self.factors[i].pow(e)
    }

    /// Point with every a_ij assigned, for evaluation.
    pub fn point(&self, entries: &[Vec<Rational>]) -> HashMap<Symbol, Rational> {
        let mut pt = HashMap::new();
        for (i, row) in entries.iter().enumerate() {
            for (j, v) in row.iter().enumerate() {
                pt.insert(self.vars[i][j], v.clone());
            }
        }
        pt
    }
}

/// `num / (det A^e₀ · det A₁₁^e₁ · det A₂₂^e₂)` with num polynomial in the
/// a_ij and λ. Zero is exactly `num == 0`; no gcd is ever taken. Constants
/// carry no chart.
#[derive(Clone)]
pub struct ChartFunc {
    num: MultiPoly,
    exps: [u32; 3],
    chart: Option<Arc<Chart>>,
}

impl ChartFunc {
    pub fn constant(c: Rational) -> Self {
        ChartFunc { num: MultiPoly::constant(c), exps: [0; 3], chart: None }
    }

    pub fn new(chart: &Arc<Chart>, num: MultiPoly, exps: [u32; 3]) -> Self {
        ChartFunc { num, exps, chart: Some(chart.clone()) }.normalized_zero()
    }

    pub fn poly(chart: &Arc<Chart>, num: MultiPoly) -> Self {
        Self::new(chart, num, [0; 3])
    }

    /// The parameter λ as a function.
    pub fn lambda(chart: &Arc<Chart>) -> Self {
        Self::poly(chart, MultiPoly::var(chart.lambda))
    }

    pub fn numerator(&self) -> &MultiPoly {
        &self.num
    }

    pub fn exponents(&self) -> [u32; 3] {
        self.exps
    }

    pub fn chart(&self) -> Option<&Arc<Chart>> {
        self.chart.as_ref()
    }

    fn normalized_zero(mut self) -> Self {
        if self.num.is_zero() {
            self.exps = [0; 3];
        }
        self
    }

    fn pick_chart(&self, other: &ChartFunc) -> Option<Arc<Chart>> {
        self.chart.clone().or_else(|| other.chart.clone())
    }

    /// Numerator over the larger denominator with exponents `target`.
    pub fn lifted_numerator(&self, target: [u32; 3]) -> MultiPoly {
        self.lifted_with(target, self.chart.as_ref())
    }

    /// Like `lifted_numerator`, for constants that carry no chart.
    pub fn lifted_in(&self, target: [u32; 3], chart: &Arc<Chart>) -> MultiPoly {
        self.lifted_with(target, Some(chart))
    }

    fn lifted_with(&self, target: [u32; 3], chart: Option<&Arc<Chart>>) -> MultiPoly {
        let mut num = self.num.clone();
        if num.is_zero() {
            return num;
        }
        for i in 0..3 {
            assert!(target[i] >= self.exps[i], "lift target below current exponent");
            let extra = target[i] - self.exps[i];
            if extra > 0 {
                let chart = chart.expect("non-constant denominator has a chart");
                num = num.mul(&chart.power(i, extra));
            }
        }
        num
    }

    pub fn common_exponents<'a>(items: impl IntoIterator<Item = &'a ChartFunc>) -> [u32; 3] {
        let mut e = [0u32; 3];
        for f in items {
            if f.num.is_zero() {
                continue;
            }
            for (k, x) in e.iter_mut().enumerate() {
                *x = (*x).max(f.exps[k]);
            }
        }
        e
    }

    pub fn add(&self, other: &ChartFunc) -> ChartFunc {
        if other.num.is_zero() {
            return self.clone();
        }
        if self.num.is_zero() {
            return other.clone();
        }
        let chart = self.pick_chart(other);
        if self.exps == other.exps {
            return ChartFunc { num: self.num.add(&other.num), exps: self.exps, chart }
                .normalized_zero();
        }
        let target = Self::common_exponents([self, other]);
        let num = self
            .lifted_with(target, chart.as_ref())
            .add(&other.lifted_with(target, chart.as_ref()));
        ChartFunc { num, exps: target, chart }.normalized_zero()
    }

    pub fn neg(&self) -> ChartFunc {
        ChartFunc { num: self.num.neg(), exps: self.exps, chart: self.chart.clone() }
    }

    pub fn sub(&self, other: &ChartFunc) -> ChartFunc {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &ChartFunc) -> ChartFunc {
        if self.num.is_zero() || other.num.is_zero() {
            return ChartFunc::constant(Rational::zero());
        }
        let exps = [
            self.exps[0] + other.exps[0],
            self.exps[1] + other.exps[1],
            self.exps[2] + other.exps[2],
        ];
        ChartFunc { num: self.num.mul(&other.num), exps, chart: self.pick_chart(other) }
    }

    pub fn scale(&self, c: &Rational) -> ChartFunc {
        ChartFunc { num: self.num.scale(c), exps: self.exps, chart: self.chart.clone() }
            .normalized_zero()
    }

    /// Cancels chart factors that divide the numerator.
    pub fn reduce(&self) -> ChartFunc {
        let mut out = self.clone();
        if out.num.is_zero() {
            return out;
        }
        for i in 0..3 {
            while out.exps[i] > 0 {
                let chart = out.chart.as_ref().expect("chart present");
                match out.num.exact_div(&chart.factors[i]) {
                    Some(qt) => {
                        out.num = qt;
                        out.exps[i] -= 1;
                    }
                    None => break,
                }
            }
        }
        out
    }

    /// D_rs of the function. The result is reduced.
    pub fn derivative(&self, r: usize, s: usize) -> ChartFunc {
        let Some(chart) = self.chart.as_ref() else {
            return ChartFunc::constant(Rational::zero());
        };
        if self.num.is_zero() {
            return self.clone();
        }
        let active: Vec<usize> = (0..3).filter(|&i| self.exps[i] > 0).collect();
        let prod_except = |skip: Option<usize>| -> MultiPoly {
            active
                .iter()
                .filter(|&&i| Some(i) != skip)
                .fold(MultiPoly::one(), |acc, &i| acc.mul(&chart.factors[i]))
        };
        // D(P/F) = (DP·Πf − P Σ e_i Df_i Π_{k≠i} f_k) / (F·Πf)
        let mut num = chart.d_poly(r, s, &self.num).mul(&prod_except(None));
        for &i in &active {
            let df = &chart.dfactors[r][s][i];
            if df.is_zero() {
                continue;
            }
            let term = self
                .num
                .mul(df)
                .mul(&prod_except(Some(i)))
                .scale(&Rational::integer(self.exps[i] as i64));
            num = num.sub(&term);
        }
        let mut exps = self.exps;
        for &i in &active {
            exps[i] += 1;
        }
        ChartFunc { num, exps, chart: Some(chart.clone()) }.normalized_zero().reduce()
    }

    /// Value at a point assigning every a_ij; λ stays symbolic.
    pub fn evaluate(&self, point: &HashMap<Symbol, Rational>) -> Result<RatFunc, ExactError> {
        let num = self.num.partial_evaluate(point);
        let mut den = Rational::one();
        if let Some(chart) = &self.chart {
            for i in 0..3 {
                if self.exps[i] > 0 {
                    let f = chart.factors[i].evaluate(point)?;
                    den = &den * &f.pow(self.exps[i] as i32)?;
                }
            }
        }
        if den.is_zero() {
            return Err(ExactError::Pole);
        }
        Ok(RatFunc::from_poly(num).scale(&den.recip()?))
    }

    /// Fully rational value; λ must be in `point`.
    pub fn evaluate_rational(&self, point: &HashMap<Symbol, Rational>) -> Result<Rational, ExactError> {
        self.evaluate(point)?.evaluate(point)
    }

    pub fn denominator(&self) -> MultiPoly {
        match &self.chart {
            None => MultiPoly::one(),
            Some(chart) => (0..3).fold(MultiPoly::one(), |acc, i| acc.mul(&chart.power(i, self.exps[i]))),
        }
    }

    pub fn to_ratfunc(&self) -> RatFunc {
        RatFunc::new(self.num.clone(), self.denominator()).expect("chart denominator is nonzero")
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }
}

impl PartialEq for ChartFunc {
    fn eq(&self, other: &Self) -> bool {
        self.sub(other).num.is_zero()
    }
}

impl fmt::Display for ChartFunc {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.exps == [0; 3] {
            return write!(f, "{}", self.num);
        }
        let names = ["det(A)", "det(A11)", "det(A22)"];
        let den: Vec<String> = (0..3)
            .filter(|&i| self.exps[i] > 0)
            .map(|i| if self.exps[i] == 1 { names[i].to_string() } else { format!("{}^{}", names[i], self.exps[i]) })
            .collect();
        write!(f, "({})/({})", self.num, den.join("*"))
    }
}

impl fmt::Debug for ChartFunc {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl Scalar for ChartFunc {
    fn zero() -> Self {
        ChartFunc::constant(Rational::zero())
    }
    fn one() -> Self {
        ChartFunc::constant(Rational::one())
    }
    fn from_rational(r: &Rational) -> Self {
        ChartFunc::constant(r.clone())
    }
    fn is_zero(&self) -> bool {
        self.num.is_zero()
    }
    fn plus(&self, other: &Self) -> Self {
        self.add(other)
    }
    fn minus(&self, other: &Self) -> Self {
        self.sub(other)
    }
    fn times(&self, other: &Self) -> Self {
        self.mul(other)
    }
    fn negated(&self) -> Self {
        self.neg()
    }
    /// Division is exact only by nonzero constants.
    fn divide(&self, other: &Self) -> Result<Self, ExactError> {
        if other.num.is_zero() {
            return Err(ExactError::DivisionByZero);
        }
        match (other.exps, other.num.as_constant()) {
            ([0, 0, 0], Some(c)) => Ok(self.scale(&c.recip()?)),
            _ => Err(ExactError::NotExact),
        }
    }
    fn to_export_string(&self) -> String {
        let d = self.denominator();
        if d.is_one() {
            self.num.to_string()
        } else {
            format!("({})/({})", self.num, d)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn a(chart: &Arc<Chart>, i: usize, j: usize) -> ChartFunc {
        ChartFunc::poly(chart, MultiPoly::var(chart.var(i, j)))
    }

    fn inv_det(chart: &Arc<Chart>) -> ChartFunc {
        ChartFunc::new(chart, MultiPoly::one(), [1, 0, 0])
    }

    #[test]
    fn factors_for_rank_two() {
        let c = Chart::new(1, 1);
        let expected: RatFunc = "a11*a22 - a12*a21".parse().unwrap();
        assert_eq!(RatFunc::from_poly(c.factor(0).clone()), expected);
        assert_eq!(RatFunc::from_poly(c.factor(1).clone()), "a11".parse().unwrap());
    }

    #[test]
    fn adjugate_inverts() {
        for (p, q) in [(1, 1), (1, 2), (2, 1)] {
            let c = Chart::new(p, q);
            let n = p + q;
            for i in 0..n {
                for j in 0..n {
                    let mut s = MultiPoly::zero();
                    for k in 0..n {
                        s = s.add(&MultiPoly::var(c.var(i, k)).mul(&c.adj()[k][j]));
                    }
                    let expect = if i == j { c.factor(0).clone() } else { MultiPoly::zero() };
                    assert_eq!(s, expect);
                }
            }
        }
    }

    #[test]
    fn arithmetic_matches_ratfunc() {
        let c = Chart::new(1, 1);
        let f = a(&c, 0, 1).mul(&inv_det(&c)).add(&a(&c, 1, 0));
        let g = inv_det(&c).mul(&inv_det(&c)).sub(&a(&c, 0, 0));
        let fr = f.to_ratfunc();
        let gr = g.to_ratfunc();
        assert_eq!(f.mul(&g).to_ratfunc(), fr.mul(&gr));
        assert_eq!(f.add(&g).to_ratfunc(), fr.add(&gr));
        assert_eq!(f.sub(&f), ChartFunc::zero());
    }

    #[test]
    fn derivative_matches_ratfunc() {
        let c = Chart::new(1, 1);
        let f = a(&c, 0, 1).mul(&a(&c, 1, 1)).mul(&inv_det(&c));
        for r in 0..2 {
            for s in 0..2 {
                let d = f.derivative(r, s).to_ratfunc();
                // D_rs = Σ_j a_sj ∂/∂a_rj
                let fr = f.to_ratfunc();
                let mut expect = RatFunc::zero();
                for j in 0..2 {
                    let v = c.var(r, j).name();
                    let coeff: RatFunc = c.var(s, j).name().parse().unwrap();
                    expect = expect.add(&fr.partial_derivative(&v).unwrap().mul(&coeff));
                }
                assert_eq!(d, expect, "D_{r}{s}");
            }
        }
    }

    #[test]
    fn determinant_is_an_eigenfunction() {
        // D_rs det A = δ_rs det A
        let c = Chart::new(1, 2);
        let d = ChartFunc::poly(&c, c.factor(0).clone());
        for r in 0..3 {
            for s in 0..3 {
                let expect = if r == s { d.clone() } else { ChartFunc::zero() };
                assert_eq!(d.derivative(r, s), expect);
            }
        }
    }

    #[test]
    fn reduce_cancels_factors() {
        let c = Chart::new(1, 1);
        let f = ChartFunc::new(&c, c.factor(0).mul(&c.factor(1).clone()), [2, 1, 0]);
        let r = f.reduce();
        assert_eq!(r.exponents(), [1, 0, 0]);
        assert!(r.numerator().is_one());
        assert_eq!(r, f);
    }
}
