use std::collections::BTreeMap;

use serde_json::{json, Value};

use super::ddaha::DdahaBuild;
use super::FunctorError;
use crate::exact::{RatFunc, Rational, Scalar, Symbol};
use crate::glmodules::{twisted, ChartFunc, SymmetricPair};
use crate::presentations::{
    apply_lin, Generator, Lin, RelationExpression, RelationResult, Representation, Status,
};

/// Coefficients of g(Z) = Σ_k g_k Z^k, parsed from text in the variable Z.
/// Rejects g unless g(Z) = g(Z⁻¹).
pub fn parse_even_laurent(text: &str) -> Result<BTreeMap<i64, Rational>, FunctorError> {
    let f: RatFunc = text.parse()?;
    let z = Symbol::new("Z");
    let (num, den) = (f.numerator(), f.denominator());
    if den.terms().count() != 1 {
        return Err(FunctorError::Invalid(format!("{text:?} is not a Laurent polynomial in Z")));
    }
    let (den_mono, den_c) = den.leading().expect("denominator is nonzero");
    let shift = den_mono.degree_in(z) as i64;
    if den_mono.total_degree() as i64 != shift {
        return Err(FunctorError::Invalid(format!("{text:?} involves variables other than Z")));
    }
    let mut out = BTreeMap::new();
    for (mono, c) in num.terms() {
        let d = mono.degree_in(z);
        if mono.total_degree() != d {
            return Err(FunctorError::Invalid(format!("{text:?} involves variables other than Z")));
        }
        out.insert(d as i64 - shift, c.checked_div(den_c)?);
    }
    for (k, c) in &out {
        if out.get(&-k) != Some(c) {
            return Err(FunctorError::Invalid(format!("{text:?} is not invariant under Z -> 1/Z")));
        }
    }
    Ok(out)
}

/// θ*(Σ_m g(X_m)) = n·g(1) + c₁·tr(g(X) − g(1)), c₁ = n/N + ½(λ+μ)(q−p).
/// Also kept in trace form: constant + Σ_{k≥1} trace_coeffs[k]·tr(X^k),
/// using tr X^{−k} = tr X^k.
#[derive(Clone, Debug, PartialEq)]
pub struct ThetaStar<S> {
    pub g: BTreeMap<i64, Rational>,
    pub g_at_one: Rational,
    pub c0: S,
    pub c1: S,
    pub constant: S,
    pub trace_coeffs: BTreeMap<u32, S>,
}

pub fn theta_star<S: Scalar>(
    g: &BTreeMap<i64, Rational>,
    n: usize,
    pair: SymmetricPair,
    sigma: &S,
) -> Result<ThetaStar<S>, FunctorError> {
    for (k, c) in g {
        if g.get(&-k) != Some(c) {
            return Err(FunctorError::Invalid("g is not invariant under Z -> 1/Z".into()));
        }
    }
    let big_n = pair.n() as i64;
    let g1: Rational = g.values().fold(Rational::zero(), |a, c| a + c.clone());
    let g1s = S::from_rational(&g1);
    let half_qp = S::from_rational(&Rational::new(pair.q as i64 - pair.p as i64, 2)?);
    let c1 = S::from_rational(&Rational::new(n as i64, big_n)?).plus(&sigma.times(&half_qp));
    let c0 = S::from_i64(n as i64).times(&g1s).minus(&c1.times(&S::from_i64(big_n)).times(&g1s));
    let g0 = S::from_rational(&g.get(&0).cloned().unwrap_or_else(Rational::zero));
    let constant = c0.plus(&c1.times(&S::from_i64(big_n)).times(&g0));
    let trace_coeffs = g
        .iter()
        .filter(|(k, _)| **k > 0)
        .map(|(k, c)| (*k as u32, c1.times(&S::from_rational(c)).times(&S::from_i64(2))))
        .filter(|(_, c)| !c.is_zero())
        .collect();
    Ok(ThetaStar { g: g.clone(), g_at_one: g1, c0, c1, constant, trace_coeffs })
}

impl<S: Scalar> ThetaStar<S> {
    pub fn to_json(&self) -> Value {
        let g: serde_json::Map<String, Value> = self
            .g
            .iter()
            .map(|(k, c)| (k.to_string(), Value::String(c.to_export_string())))
            .collect();
        let traces: serde_json::Map<String, Value> = self
            .trace_coeffs
            .iter()
            .map(|(k, c)| (format!("tr(X^{k})"), Value::String(c.to_export_string())))
            .collect();
        json!({
            "g": g,
            "g_at_one": self.g_at_one.to_export_string(),
            "c0": self.c0.to_export_string(),
            "c1": self.c1.to_export_string(),
            "constant": self.constant.to_export_string(),
            "trace_coefficients": traces,
        })
    }
}

impl ThetaStar<ChartFunc> {
    /// Σ_m g(X_m) as a word combination.
    pub fn sum_lin(&self, n: usize) -> Lin<ChartFunc> {
        let mut lin = Lin::zero();
        for m in 0..n {
            for (k, c) in &self.g {
                let gen = if *k >= 0 { Generator::X(m) } else { Generator::XInv(m) };
                let word = vec![gen; k.unsigned_abs() as usize];
                lin = lin.plus(&Lin::term(ChartFunc::constant(c.clone()), &word));
            }
        }
        lin
    }

    /// Σ_m g(X_m) − θ*-image as an operator relation.
    pub fn relation(&self, n: usize) -> RelationExpression<ChartFunc> {
        let mut lin = self.sum_lin(n);
        lin = lin.minus(&Lin::identity().scaled(&self.constant));
        for (k, c) in &self.trace_coeffs {
            lin = lin.minus(&Lin::g(Generator::Op("trX^", *k as usize)).scaled(c));
        }
        RelationExpression { name: "theta.operator".into(), lin }
    }

    /// The θ*-image as a function on the chart.
    pub fn as_function(&self, build: &DdahaBuild) -> ChartFunc {
        self.trace_coeffs.iter().fold(self.constant.clone(), |acc, (k, c)| {
            acc.add(&c.mul(&twisted::trace(&build.model.x_power(*k as i64))))
        })
    }
}

/// At A = I we have X = I, so both Σ_m g(X_m)v and θ*·v evaluate to n·g(1)·v(I).
pub fn theta_at_identity(
    build: &DdahaBuild,
    rep: &impl Representation<Scalar = ChartFunc, Vector = Vec<ChartFunc>>,
    ts: &ThetaStar<ChartFunc>,
) -> Result<RelationResult, FunctorError> {
    let big_n = build.pair().n();
    let ident: Vec<Vec<Rational>> = (0..big_n)
        .map(|i| (0..big_n).map(|j| Rational::integer(i64::from(i == j))).collect())
        .collect();
    let point = build.model.chart().point(&ident);
    let expect_scale = Rational::integer(build.n as i64) * ts.g_at_one.clone();
    let theta_at_one = ts.as_function(build).evaluate(&point)?;
    let mut witness = None;
    if theta_at_one != RatFunc::constant(expect_scale.clone()) {
        witness = Some(("theta-image".to_string(), theta_at_one.to_string()));
    }
    let sum_only = ts.sum_lin(build.n);
    let mut checked = 0;
    for dv in build.domain() {
        if witness.is_some() {
            break;
        }
        let image = apply_lin(rep, &sum_only, &dv.vector)?;
        checked += 1;
        for (img, v) in image.iter().zip(&dv.vector) {
            let lhs = img.evaluate(&point)?;
            let rhs = v.evaluate(&point)?.scale(&expect_scale);
            if lhs != rhs {
                witness = Some((dv.label.clone(), format!("{lhs} vs {rhs}")));
                break;
            }
        }
    }
    let status = if witness.is_some() {
        Status::Fail
    } else if checked == 0 {
        Status::Partial
    } else {
        Status::Ok
    };
    let (w, r) = witness.map_or((None, None), |(a, b)| (Some(a), Some(b)));
    Ok(RelationResult { relation: "theta.at-identity".into(), status, checked, skipped: 0, witness: w, residual: r })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::functors::build_ddaha;
    use crate::presentations::verify;

    fn pair(p: usize, q: usize) -> SymmetricPair {
        SymmetricPair::new(p, q).unwrap()
    }

    #[test]
    fn parses_even_laurent_polynomials() {
        let g = parse_even_laurent("Z + 1/Z").unwrap();
        assert_eq!(g, BTreeMap::from([(-1, Rational::one()), (1, Rational::one())]));
        let g = parse_even_laurent("(Z^4 + 3*Z^2 + 1)/Z^2").unwrap();
        assert_eq!(g.len(), 3);
        assert!(parse_even_laurent("Z").is_err());
        assert!(parse_even_laurent("1/(Z+1)").is_err());
        assert!(parse_even_laurent("Z + t/Z").is_err());
    }

    #[test]
    fn constant_g_gives_n() {
        let g = parse_even_laurent("1").unwrap();
        let ts = theta_star(&g, 3, pair(1, 2), &RatFunc::symbol("s")).unwrap();
        assert_eq!(ts.constant, RatFunc::integer(3));
        assert!(ts.trace_coeffs.is_empty());
    }

    #[test]
    fn z_plus_inverse_matches_trace_relation() {
        let g = parse_even_laurent("Z + 1/Z").unwrap();
        let lambda = RatFunc::symbol("lambda");
        let mu = RatFunc::symbol("mu");
        let s = lambda.add(&mu);
        for (n, p, q) in [(1, 1, 1), (2, 1, 2), (3, 2, 1)] {
            let ts = theta_star(&g, n, pair(p, q), &s).unwrap();
            let big_n = (p + q) as i64;
            let t = RatFunc::constant(Rational::new(2 * n as i64, big_n).unwrap())
                .add(&s.mul(&RatFunc::integer(q as i64 - p as i64)));
            assert_eq!(ts.trace_coeffs[&1], t);
            let c = s.mul(&RatFunc::integer((p * p) as i64 - (q * q) as i64));
            assert_eq!(ts.constant, c);
        }
    }

    #[test]
    fn operator_check_on_rank_one_window() {
        let b = build_ddaha(1, 1, 1, 2, &Rational::new(1, 2).unwrap(), 3).unwrap();
        let rep = b.rep();
        for text in ["Z + 1/Z", "Z^2 + 1/Z^2 + 5"] {
            let g = parse_even_laurent(text).unwrap();
            let ts = theta_star(&g, 1, b.pair(), &ChartFunc::constant(b.sigma.clone())).unwrap();
            let r = verify(&rep, &[ts.relation(1)], &b.domain()).unwrap();
            assert!(r.all_ok(), "{text}: {r:?}");
            let at_one = theta_at_identity(&b, &rep, &ts).unwrap();
            assert_eq!(at_one.status, Status::Ok);
        }
    }
}
