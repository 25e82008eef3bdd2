use std::collections::HashMap;
use std::fmt;
use std::str::FromStr;

use super::poly::gcd;
use super::{ExactError, MultiPoly, Rational, Symbol};

/// Quotient of polynomials in lowest terms. The denominator is nonzero and
/// its lexicographically leading coefficient is one, so equal functions have
/// identical representations.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct RatFunc {
    num: MultiPoly,
    den: MultiPoly,
}

impl Default for RatFunc {
    fn default() -> Self {
        RatFunc::zero()
    }
}

impl RatFunc {
    pub fn zero() -> Self {
        RatFunc {
            num: MultiPoly::zero(),
            den: MultiPoly::one(),
        }
    }

    pub fn one() -> Self {
        Self::constant(Rational::one())
    }

    pub fn constant(c: Rational) -> Self {
        RatFunc {
            num: MultiPoly::constant(c),
            den: MultiPoly::one(),
        }
    }

    pub fn integer(v: i64) -> Self {
        Self::constant(Rational::integer(v))
    }

    pub fn var(s: Symbol) -> Self {
        Self::from_poly(MultiPoly::var(s))
    }

    /// Variable by name, interning it if needed.
    pub fn symbol(name: &str) -> Self {
        Self::var(Symbol::new(name))
    }

    pub fn from_poly(p: MultiPoly) -> Self {
        RatFunc {
            num: p,
            den: MultiPoly::one(),
        }
    }

    pub fn new(num: MultiPoly, den: MultiPoly) -> Result<Self, ExactError> {
        if den.is_zero() {
            return Err(ExactError::DivisionByZero);
        }
        Ok(Self::normalized(num, den))
    }

    fn normalized(num: MultiPoly, den: MultiPoly) -> Self {
        if num.is_zero() {
            return RatFunc::zero();
        }
        if let Some(c) = den.as_constant() {
            let inv = c.recip().expect("nonzero denominator");
            return RatFunc {
                num: num.scale(&inv),
                den: MultiPoly::one(),
            };
        }
        let g = gcd(&num, &den);
        let (num, den) = if g.is_one() {
            (num, den)
        } else {
            (
                num.exact_div(&g).expect("gcd divides numerator"),
                den.exact_div(&g).expect("gcd divides denominator"),
            )
        };
        let lc = den.leading_coeff();
        if lc.is_one() {
            RatFunc { num, den }
        } else {
            let inv = lc.recip().expect("nonzero leading coefficient");
            RatFunc {
                num: num.scale(&inv),
                den: den.scale(&inv),
            }
        }
    }

    pub fn numerator(&self) -> &MultiPoly {
        &self.num
    }

    pub fn denominator(&self) -> &MultiPoly {
        &self.den
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn is_polynomial(&self) -> bool {
        self.den.is_one()
    }

    pub fn as_constant(&self) -> Option<Rational> {
        if self.den.is_one() {
            self.num.as_constant()
        } else {
            None
        }
    }

    pub fn add(&self, other: &RatFunc) -> RatFunc {
        if self.is_zero() {
            return other.clone();
        }
        if other.is_zero() {
            return self.clone();
        }
        if self.den.is_one() && other.den.is_one() {
            return RatFunc::from_poly(self.num.add(&other.num));
        }
        if self.den == other.den {
            return Self::normalized(self.num.add(&other.num), self.den.clone());
        }
        if other.den.is_one() {
            return Self::normalized(self.num.add(&other.num.mul(&self.den)), self.den.clone());
        }
        if self.den.is_one() {
            return Self::normalized(self.num.mul(&other.den).add(&other.num), other.den.clone());
        }
        let g = gcd(&self.den, &other.den);
        let a = self.den.exact_div(&g).expect("gcd divides");
        let b = other.den.exact_div(&g).expect("gcd divides");
        let num = self.num.mul(&b).add(&other.num.mul(&a));
        Self::normalized(num, self.den.mul(&b))
    }

    pub fn neg(&self) -> RatFunc {
        RatFunc {
            num: self.num.neg(),
            den: self.den.clone(),
        }
    }

    pub fn sub(&self, other: &RatFunc) -> RatFunc {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &RatFunc) -> RatFunc {
        if self.is_zero() || other.is_zero() {
            return RatFunc::zero();
        }
        if self.den.is_one() && other.den.is_one() {
            return RatFunc::from_poly(self.num.mul(&other.num));
        }
        let g1 = gcd(&self.num, &other.den);
        let g2 = gcd(&other.num, &self.den);
        let n1 = self.num.exact_div(&g1).expect("gcd divides");
        let d2 = other.den.exact_div(&g1).expect("gcd divides");
        let n2 = other.num.exact_div(&g2).expect("gcd divides");
        let d1 = self.den.exact_div(&g2).expect("gcd divides");
        let num = n1.mul(&n2);
        let den = d1.mul(&d2);
        let lc = den.leading_coeff();
        let inv = lc.recip().expect("nonzero leading coefficient");
        RatFunc {
            num: num.scale(&inv),
            den: den.scale(&inv),
        }
    }

    pub fn recip(&self) -> Result<RatFunc, ExactError> {
        if self.is_zero() {
            return Err(ExactError::DivisionByZero);
        }
        let lc = self.num.leading_coeff();
        let inv = lc.recip()?;
        Ok(RatFunc {
            num: self.den.scale(&inv),
            den: self.num.scale(&inv),
        })
    }

    pub fn div(&self, other: &RatFunc) -> Result<RatFunc, ExactError> {
        Ok(self.mul(&other.recip()?))
    }

    pub fn scale(&self, c: &Rational) -> RatFunc {
        if c.is_zero() {
            return RatFunc::zero();
        }
        RatFunc {
            num: self.num.scale(c),
            den: self.den.clone(),
        }
    }

    pub fn pow(&self, e: i32) -> Result<RatFunc, ExactError> {
        let base = if e < 0 { self.recip()? } else { self.clone() };
        let mut acc = RatFunc::one();
        for _ in 0..e.unsigned_abs() {
            acc = acc.mul(&base);
        }
        Ok(acc)
    }

    /// Derivative with respect to an interned variable name.
    pub fn partial_derivative(&self, var: &str) -> Result<RatFunc, ExactError> {
        let s = Symbol::lookup(var).ok_or_else(|| ExactError::UnknownVariable(var.to_string()))?;
        Ok(self.derivative(s))
    }

    pub fn derivative(&self, s: Symbol) -> RatFunc {
        let dn = self.num.derivative(s);
        if self.den.is_one() {
            return RatFunc::from_poly(dn);
        }
        let dd = self.den.derivative(s);
        let num = dn.mul(&self.den).sub(&self.num.mul(&dd));
        Self::normalized(num, self.den.mul(&self.den))
    }

    pub fn evaluate(&self, point: &HashMap<Symbol, Rational>) -> Result<Rational, ExactError> {
        let d = self.den.evaluate(point)?;
        let n = self.num.evaluate(point)?;
        if d.is_zero() {
            return Err(ExactError::Pole);
        }
        Ok(&n / &d)
    }

    /// Substitutes values for some variables.
    pub fn partial_evaluate(&self, point: &HashMap<Symbol, Rational>) -> Result<RatFunc, ExactError> {
        let d = self.den.partial_evaluate(point);
        if d.is_zero() {
            return Err(ExactError::Pole);
        }
        RatFunc::new(self.num.partial_evaluate(point), d)
    }

    /// Evaluates numerator and denominator separately without normalizing,
    /// for checking that normalization preserves values.
    pub fn evaluate_unnormalized(
        num: &MultiPoly,
        den: &MultiPoly,
        point: &HashMap<Symbol, Rational>,
    ) -> Result<Rational, ExactError> {
        let d = den.evaluate(point)?;
        if d.is_zero() {
            return Err(ExactError::Pole);
        }
        Ok(&num.evaluate(point)? / &d)
    }
}

impl From<Rational> for RatFunc {
    fn from(c: Rational) -> Self {
        RatFunc::constant(c)
    }
}

impl From<i64> for RatFunc {
    fn from(v: i64) -> Self {
        RatFunc::integer(v)
    }
}

impl fmt::Display for RatFunc {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den.is_one() {
            return write!(f, "{}", self.num);
        }
        let wrap = |p: &MultiPoly| {
            if p.len() == 1 && !p.leading_coeff().is_negative() {
                p.to_string()
            } else {
                format!("({p})")
            }
        };
        write!(f, "{}/{}", wrap(&self.num), wrap(&self.den))
    }
}

impl fmt::Debug for RatFunc {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl FromStr for RatFunc {
    type Err = ExactError;

    /// Parses `+ - * / ^`, parentheses, decimal or integer literals and
    /// identifiers. Exponents must be integer literals.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let tokens = tokenize(s)?;
        let mut parser = Parser { tokens, pos: 0 };
        let value = parser.expr()?;
        if parser.pos != parser.tokens.len() {
            return Err(ExactError::Parse(format!(
                "unexpected trailing input in {s:?}"
            )));
        }
        Ok(value)
    }
}

#[derive(Debug, Clone, PartialEq)]
enum Token {
    Num(Rational),
    Ident(String),
    Op(char),
}

fn tokenize(s: &str) -> Result<Vec<Token>, ExactError> {
    let chars: Vec<char> = s.chars().collect();
    let mut out = Vec::new();
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        if c.is_whitespace() {
            i += 1;
        } else if c.is_ascii_digit() || c == '.' {
            let start = i;
            while i < chars.len() && (chars[i].is_ascii_digit() || chars[i] == '.') {
                i += 1;
            }
            let text: String = chars[start..i].iter().collect();
            out.push(Token::Num(text.parse()?));
        } else if c.is_alphabetic() || c == '_' {
            let start = i;
            while i < chars.len() && (chars[i].is_alphanumeric() || chars[i] == '_') {
                i += 1;
            }
            out.push(Token::Ident(chars[start..i].iter().collect()));
        } else if "+-*/^()".contains(c) {
            out.push(Token::Op(c));
            i += 1;
        } else {
            return Err(ExactError::Parse(format!("unexpected character {c:?}")));
        }
    }
    Ok(out)
}

struct Parser {
    tokens: Vec<Token>,
    pos: usize,
}

impl Parser {
    fn peek_op(&self) -> Option<char> {
        match self.tokens.get(self.pos) {
            Some(Token::Op(c)) => Some(*c),
            _ => None,
        }
    }

    fn expr(&mut self) -> Result<RatFunc, ExactError> {
        let mut acc = self.term()?;
        while let Some(op @ ('+' | '-')) = self.peek_op() {
            self.pos += 1;
            let rhs = self.term()?;
            acc = if op == '+' { acc.add(&rhs) } else { acc.sub(&rhs) };
        }
        Ok(acc)
    }

    fn term(&mut self) -> Result<RatFunc, ExactError> {
        let mut acc = self.unary()?;
        while let Some(op @ ('*' | '/')) = self.peek_op() {
            self.pos += 1;
            let rhs = self.unary()?;
            acc = if op == '*' { acc.mul(&rhs) } else { acc.div(&rhs)? };
        }
        Ok(acc)
    }

    fn unary(&mut self) -> Result<RatFunc, ExactError> {
        match self.peek_op() {
            Some('-') => {
                self.pos += 1;
                Ok(self.unary()?.neg())
            }
            Some('+') => {
                self.pos += 1;
                self.unary()
            }
            _ => self.power(),
        }
    }

    fn power(&mut self) -> Result<RatFunc, ExactError> {
        let base = self.atom()?;
        if self.peek_op() != Some('^') {
            return Ok(base);
        }
        self.pos += 1;
        let negative = if self.peek_op() == Some('-') {
            self.pos += 1;
            true
        } else {
            false
        };
        let exp = match self.tokens.get(self.pos) {
            Some(Token::Num(r)) => r
                .to_i64()
                .and_then(|e| i32::try_from(e).ok())
                .ok_or_else(|| ExactError::Parse("exponent must be an integer".into()))?,
            _ => return Err(ExactError::Parse("missing exponent".into())),
        };
        self.pos += 1;
        base.pow(if negative { -exp } else { exp })
    }

    fn atom(&mut self) -> Result<RatFunc, ExactError> {
        let tok = self
            .tokens
            .get(self.pos)
            .cloned()
            .ok_or_else(|| ExactError::Parse("unexpected end of input".into()))?;
        self.pos += 1;
        match tok {
            Token::Num(r) => Ok(RatFunc::constant(r)),
            Token::Ident(name) => Ok(RatFunc::var(Symbol::new(&name))),
            Token::Op('(') => {
                let inner = self.expr()?;
                if self.peek_op() != Some(')') {
                    return Err(ExactError::Parse("missing closing parenthesis".into()));
                }
                self.pos += 1;
                Ok(inner)
            }
            Token::Op(c) => Err(ExactError::Parse(format!("unexpected operator {c:?}"))),
        }
    }
}
