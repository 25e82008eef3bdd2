use std::cmp::Ordering;
use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt;

use smallvec::SmallVec;

use super::{ExactError, Rational, Symbol};

/// Power product of interned variables, stored as `(variable, exponent)` pairs
/// sorted by variable with strictly positive exponents.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct Monomial(SmallVec<[(u32, u32); 4]>);

impl Monomial {
    pub fn one() -> Self {
        Monomial(SmallVec::new())
    }

    pub fn var(s: Symbol) -> Self {
        Self::var_pow(s, 1)
    }

    pub fn var_pow(s: Symbol, e: u32) -> Self {
        let mut v = SmallVec::new();
        if e > 0 {
            v.push((s.0, e));
        }
        Monomial(v)
    }

    pub fn is_one(&self) -> bool {
        self.0.is_empty()
    }

    pub fn degree_in(&self, s: Symbol) -> u32 {
        self.0
            .iter()
            .find(|(v, _)| *v == s.0)
            .map(|(_, e)| *e)
            .unwrap_or(0)
    }

    pub fn total_degree(&self) -> u32 {
        self.0.iter().map(|(_, e)| e).sum()
    }

    pub fn factors(&self) -> impl Iterator<Item = (Symbol, u32)> + '_ {
        self.0.iter().map(|&(v, e)| (Symbol(v), e))
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        let (a, b) = (&self.0, &other.0);
        let mut out = SmallVec::with_capacity(a.len() + b.len());
        let (mut i, mut j) = (0, 0);
        while i < a.len() && j < b.len() {
            match a[i].0.cmp(&b[j].0) {
                Ordering::Less => {
                    out.push(a[i]);
                    i += 1;
                }
                Ordering::Greater => {
                    out.push(b[j]);
                    j += 1;
                }
                Ordering::Equal => {
                    out.push((a[i].0, a[i].1 + b[j].1));
                    i += 1;
                    j += 1;
                }
            }
        }
        out.extend_from_slice(&a[i..]);
        out.extend_from_slice(&b[j..]);
        Monomial(out)
    }

    /// `self / other` when `other` divides `self`.
    pub fn div(&self, other: &Monomial) -> Option<Monomial> {
        let mut out = SmallVec::with_capacity(self.0.len());
        let mut j = 0;
        for &(v, e) in &self.0 {
            if j < other.0.len() && other.0[j].0 < v {
                return None;
            }
            if j < other.0.len() && other.0[j].0 == v {
                let f = other.0[j].1;
                j += 1;
                match e.cmp(&f) {
                    Ordering::Less => return None,
                    Ordering::Equal => continue,
                    Ordering::Greater => out.push((v, e - f)),
                }
            } else {
                out.push((v, e));
            }
        }
        if j < other.0.len() {
            return None;
        }
        Some(Monomial(out))
    }

    pub fn gcd(&self, other: &Monomial) -> Monomial {
        let mut out = SmallVec::new();
        let mut j = 0;
        for &(v, e) in &self.0 {
            while j < other.0.len() && other.0[j].0 < v {
                j += 1;
            }
            if j < other.0.len() && other.0[j].0 == v {
                out.push((v, e.min(other.0[j].1)));
            }
        }
        Monomial(out)
    }

    /// Drops variable `s`, returning the remaining monomial and the dropped exponent.
    pub fn split_off(&self, s: Symbol) -> (Monomial, u32) {
        let mut exp = 0;
        let rest = self
            .0
            .iter()
            .filter(|(v, e)| {
                if *v == s.0 {
                    exp = *e;
                    false
                } else {
                    true
                }
            })
            .copied()
            .collect();
        (Monomial(rest), exp)
    }
}

/// Lexicographic order; variables interned earlier are more significant.
impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        let (a, b) = (&self.0, &other.0);
        for (x, y) in a.iter().zip(b.iter()) {
            if x.0 != y.0 {
                return if x.0 < y.0 {
                    Ordering::Greater
                } else {
                    Ordering::Less
                };
            }
            if x.1 != y.1 {
                return x.1.cmp(&y.1);
            }
        }
        a.len().cmp(&b.len())
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_one() {
            return f.write_str("1");
        }
        for (k, (s, e)) in self.factors().enumerate() {
            if k > 0 {
                f.write_str("*")?;
            }
            if e == 1 {
                write!(f, "{s}")?;
            } else {
                write!(f, "{s}^{e}")?;
            }
        }
        Ok(())
    }
}

impl fmt::Debug for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// Sparse multivariate polynomial over the rationals. Zero coefficients are
/// never stored.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct MultiPoly {
    terms: BTreeMap<Monomial, Rational>,
}

impl MultiPoly {
    pub fn zero() -> Self {
        MultiPoly::default()
    }

    pub fn one() -> Self {
        Self::constant(Rational::one())
    }

    pub fn constant(c: Rational) -> Self {
        Self::term(Monomial::one(), c)
    }

    pub fn var(s: Symbol) -> Self {
        Self::term(Monomial::var(s), Rational::one())
    }

    pub fn term(m: Monomial, c: Rational) -> Self {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(m, c);
        }
        MultiPoly { terms }
    }

    pub fn from_terms(it: impl IntoIterator<Item = (Monomial, Rational)>) -> Self {
        let mut p = MultiPoly::zero();
        for (m, c) in it {
            p.add_term(m, &c);
        }
        p
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_constant(&self) -> bool {
        self.terms.is_empty() || (self.terms.len() == 1 && self.terms.keys().next().unwrap().is_one())
    }

    pub fn is_one(&self) -> bool {
        self.terms.len() == 1
            && self.terms.keys().next().unwrap().is_one()
            && self.terms.values().next().unwrap().is_one()
    }

    pub fn as_constant(&self) -> Option<Rational> {
        if self.terms.is_empty() {
            Some(Rational::zero())
        } else if self.is_constant() {
            Some(self.terms.values().next().unwrap().clone())
        } else {
            None
        }
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &Rational)> {
        self.terms.iter()
    }

    /// Leading term in lexicographic order.
    pub fn leading(&self) -> Option<(&Monomial, &Rational)> {
        self.terms.iter().next_back()
    }

    pub fn leading_coeff(&self) -> Rational {
        self.leading().map(|(_, c)| c.clone()).unwrap_or_else(Rational::zero)
    }

    pub fn add_term(&mut self, m: Monomial, c: &Rational) {
        if c.is_zero() {
            return;
        }
        match self.terms.get_mut(&m) {
            Some(existing) => {
                let sum = &*existing + c;
                if sum.is_zero() {
                    self.terms.remove(&m);
                } else {
                    *existing = sum;
                }
            }
            None => {
                self.terms.insert(m, c.clone());
            }
        }
    }

    pub fn add(&self, other: &MultiPoly) -> MultiPoly {
        let (big, small) = if self.len() >= other.len() {
            (self, other)
        } else {
            (other, self)
        };
        let mut out = big.clone();
        for (m, c) in &small.terms {
            out.add_term(m.clone(), c);
        }
        out
    }

    pub fn sub(&self, other: &MultiPoly) -> MultiPoly {
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(m.clone(), &-c);
        }
        out
    }

    pub fn neg(&self) -> MultiPoly {
        MultiPoly {
            terms: self.terms.iter().map(|(m, c)| (m.clone(), -c)).collect(),
        }
    }

    pub fn scale(&self, c: &Rational) -> MultiPoly {
        if c.is_zero() {
            return MultiPoly::zero();
        }
        MultiPoly {
            terms: self.terms.iter().map(|(m, a)| (m.clone(), a * c)).collect(),
        }
    }

    pub fn mul_term(&self, m: &Monomial, c: &Rational) -> MultiPoly {
        if c.is_zero() {
            return MultiPoly::zero();
        }
        MultiPoly {
            terms: self.terms.iter().map(|(k, a)| (k.mul(m), a * c)).collect(),
        }
    }

    pub fn mul(&self, other: &MultiPoly) -> MultiPoly {
        if self.is_zero() || other.is_zero() {
            return MultiPoly::zero();
        }
        if let Some(c) = other.as_constant() {
            return self.scale(&c);
        }
        if let Some(c) = self.as_constant() {
            return other.scale(&c);
        }
        let mut out = MultiPoly::zero();
        for (ma, ca) in &self.terms {
            for (mb, cb) in &other.terms {
                out.add_term(ma.mul(mb), &(ca * cb));
            }
        }
        out
    }

    pub fn pow(&self, e: u32) -> MultiPoly {
        let mut acc = MultiPoly::one();
        for _ in 0..e {
            acc = acc.mul(self);
        }
        acc
    }

    pub fn degree_in(&self, s: Symbol) -> u32 {
        self.terms.keys().map(|m| m.degree_in(s)).max().unwrap_or(0)
    }

    pub fn total_degree(&self) -> u32 {
        self.terms.keys().map(|m| m.total_degree()).max().unwrap_or(0)
    }

    pub fn variables(&self) -> BTreeSet<Symbol> {
        self.terms
            .keys()
            .flat_map(|m| m.factors().map(|(s, _)| s))
            .collect()
    }

    /// Coefficients with respect to `s`, keyed by the exponent of `s`.
    pub fn coeffs_in(&self, s: Symbol) -> BTreeMap<u32, MultiPoly> {
        let mut out: BTreeMap<u32, MultiPoly> = BTreeMap::new();
        for (m, c) in &self.terms {
            let (rest, e) = m.split_off(s);
            out.entry(e).or_default().terms.insert(rest, c.clone());
        }
        out
    }

    /// Largest monomial dividing every term.
    pub fn monomial_content(&self) -> Monomial {
        let mut it = self.terms.keys();
        let Some(first) = it.next() else {
            return Monomial::one();
        };
        let mut g = first.clone();
        for m in it {
            if g.is_one() {
                break;
            }
            g = g.gcd(m);
        }
        g
    }

    pub fn div_monomial(&self, m: &Monomial) -> Option<MultiPoly> {
        if m.is_one() {
            return Some(self.clone());
        }
        let mut terms = BTreeMap::new();
        for (k, c) in &self.terms {
            terms.insert(k.div(m)?, c.clone());
        }
        Some(MultiPoly { terms })
    }

    /// Scales so the leading coefficient is one (zero stays zero).
    pub fn monic(&self) -> MultiPoly {
        match self.leading() {
            None => MultiPoly::zero(),
            Some((_, c)) if c.is_one() => self.clone(),
            Some((_, c)) => self.scale(&c.recip().expect("nonzero leading coefficient")),
        }
    }

    /// Exact quotient `self / d`, or `None` when `d` does not divide `self`.
    pub fn exact_div(&self, d: &MultiPoly) -> Option<MultiPoly> {
        if d.is_zero() {
            return None;
        }
        if let Some(c) = d.as_constant() {
            return Some(self.scale(&c.recip().ok()?));
        }
        if d.len() == 1 {
            let (m, c) = d.leading().unwrap();
            return self.div_monomial(m).map(|q| q.scale(&c.recip().unwrap()));
        }
        let (dm, dc) = d.leading().map(|(m, c)| (m.clone(), c.clone())).unwrap();
        let dc_inv = dc.recip().unwrap();
        let mut rem = self.clone();
        let mut quot = MultiPoly::zero();
        while let Some((rm, rc)) = rem.leading() {
            let qm = rm.div(&dm)?;
            let qc = rc * &dc_inv;
            rem = rem.sub(&d.mul_term(&qm, &qc));
            quot.add_term(qm, &qc);
        }
        Some(quot)
    }

    pub fn derivative(&self, s: Symbol) -> MultiPoly {
        let mut out = MultiPoly::zero();
        for (m, c) in &self.terms {
            let (rest, e) = m.split_off(s);
            if e == 0 {
                continue;
            }
            let lowered = rest.mul(&Monomial::var_pow(s, e - 1));
            out.add_term(lowered, &(c * &Rational::integer(e as i64)));
        }
        out
    }

    pub fn evaluate(&self, point: &HashMap<Symbol, Rational>) -> Result<Rational, ExactError> {
        let mut acc = Rational::zero();
        for (m, c) in &self.terms {
            let mut v = c.clone();
            for (s, e) in m.factors() {
                let x = point
                    .get(&s)
                    .ok_or_else(|| ExactError::UnknownVariable(s.name()))?;
                v = &v * &x.pow(e as i32)?;
            }
            acc = &acc + &v;
        }
        Ok(acc)
    }

    /// Substitutes values for some variables, leaving the others symbolic.
    pub fn partial_evaluate(&self, point: &HashMap<Symbol, Rational>) -> MultiPoly {
        let mut out = MultiPoly::zero();
        for (m, c) in &self.terms {
            let mut coeff = c.clone();
            let mut rest = Monomial::one();
            for (s, e) in m.factors() {
                match point.get(&s) {
                    Some(x) => coeff = &coeff * &x.pow(e as i32).expect("nonnegative power"),
                    None => rest = rest.mul(&Monomial::var_pow(s, e)),
                }
            }
            out.add_term(rest, &coeff);
        }
        out
    }

    /// Replaces variable `s` by the polynomial `value`.
    pub fn substitute(&self, s: Symbol, value: &MultiPoly) -> MultiPoly {
        let mut out = MultiPoly::zero();
        for (e, coeff) in self.coeffs_in(s) {
            out = out.add(&coeff.mul(&value.pow(e)));
        }
        out
    }
}

/// Greatest common divisor, normalized to leading coefficient one.
/// `gcd(0, 0) = 0`.
pub fn gcd(a: &MultiPoly, b: &MultiPoly) -> MultiPoly {
    if a.is_zero() {
        return b.monic();
    }
    if b.is_zero() {
        return a.monic();
    }
    if a.is_constant() || b.is_constant() {
        return MultiPoly::one();
    }
    let ma = a.monomial_content();
    let mb = b.monomial_content();
    let m = ma.gcd(&mb);
    let a1 = a.div_monomial(&ma).expect("content divides");
    let b1 = b.div_monomial(&mb).expect("content divides");
    let g = gcd_monomial_free(&a1, &b1);
    g.mul_term(&m, &Rational::one()).monic()
}

fn gcd_monomial_free(a: &MultiPoly, b: &MultiPoly) -> MultiPoly {
    if a.is_constant() || b.is_constant() {
        return MultiPoly::one();
    }
    if a.monic() == b.monic() {
        return a.monic();
    }
    let vars: BTreeSet<Symbol> = a.variables().union(&b.variables()).copied().collect();
    let x = *vars.iter().next().expect("nonconstant polynomial has a variable");
    let da = a.degree_in(x);
    let db = b.degree_in(x);
    if da == 0 {
        return gcd(a, &content_in(b, x));
    }
    if db == 0 {
        return gcd(&content_in(a, x), b);
    }
    let ca = content_in(a, x);
    let cb = content_in(b, x);
    let c = gcd(&ca, &cb);
    let pa = a.exact_div(&ca).expect("content divides");
    let pb = b.exact_div(&cb).expect("content divides");
    let (mut f, mut g) = if da >= db { (pa, pb) } else { (pb, pa) };
    let prim = loop {
        let r = pseudo_remainder(&f, &g, x);
        if r.is_zero() {
            break primitive_part(&g, x);
        }
        if r.degree_in(x) == 0 {
            break MultiPoly::one();
        }
        f = g;
        g = primitive_part(&r, x);
    };
    prim.mul(&c).monic()
}

/// GCD of the coefficients of `p` viewed as a polynomial in `x`.
fn content_in(p: &MultiPoly, x: Symbol) -> MultiPoly {
    let mut acc = MultiPoly::zero();
    for (_, c) in p.coeffs_in(x).into_iter().rev() {
        acc = gcd(&acc, &c);
        if acc.is_constant() {
            return MultiPoly::one();
        }
    }
    acc
}

fn primitive_part(p: &MultiPoly, x: Symbol) -> MultiPoly {
    let c = content_in(p, x);
    p.exact_div(&c).expect("content divides").monic()
}

fn pseudo_remainder(f: &MultiPoly, g: &MultiPoly, x: Symbol) -> MultiPoly {
    let dg = g.degree_in(x);
    let lg = g.coeffs_in(x).remove(&dg).expect("leading coefficient");
    let mut r = f.clone();
    while !r.is_zero() {
        let dr = r.degree_in(x);
        if dr < dg {
            break;
        }
        let lr = r.coeffs_in(x).remove(&dr).expect("leading coefficient");
        let shift = MultiPoly::term(Monomial::var_pow(x, dr - dg), Rational::one());
        r = r.mul(&lg).sub(&lr.mul(&shift).mul(g));
    }
    r
}

impl fmt::Display for MultiPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        for (k, (m, c)) in self.terms.iter().rev().enumerate() {
            let negative = c.is_negative();
            let abs = c.abs();
            if k == 0 {
                if negative {
                    f.write_str("-")?;
                }
            } else {
                f.write_str(if negative { " - " } else { " + " })?;
            }
            if m.is_one() {
                write!(f, "{abs}")?;
            } else if abs.is_one() {
                write!(f, "{m}")?;
            } else {
                write!(f, "{abs}*{m}")?;
            }
        }
        Ok(())
    }
}

impl fmt::Debug for MultiPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}
