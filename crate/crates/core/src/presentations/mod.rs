//! Formal relations of the type BC_n dAHA and dDAHA in the Lusztig (y) and
//! Drinfeld (ỹ) generator systems, the shift map between them, and a
//! verifier that evaluates relations in any concrete representation.
//!
//! A word `[g1, g2, g3]` denotes the product `g1 g2 g3`, so it is applied to
//! a vector right to left.

mod relations;
mod verify;

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use thiserror::Error;

use crate::exact::{Rational, Scalar};

pub use relations::{relation_set, shift_to_drinfeld, Params, Presentation, RelationExpression};
pub use verify::{
    apply_lin, apply_word, describe_sparse, verify, ApplyError, DomainVector, OperatorRep,
    Perturbed, RelationResult, Representation, ScaledY, ShiftedRep, Status, VerificationReport,
};

/// Generator symbol; indices are 0-based.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub enum Generator {
    /// S_ij with i < j; the simple reflection S_i is `Swap(i, i+1)`.
    Swap(usize, usize),
    Gamma(usize),
    Y(usize),
    YTilde(usize),
    X(usize),
    XInv(usize),
    /// Model-specific operator, e.g. multiplication by tr X.
    Op(&'static str, usize),
}

impl Generator {
    pub fn s(i: usize, j: usize) -> Generator {
        assert_ne!(i, j, "S_ii is not a reflection");
        Generator::Swap(i.min(j), i.max(j))
    }

    pub fn simple(i: usize) -> Generator {
        Generator::Swap(i, i + 1)
    }
}

impl fmt::Display for Generator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            Generator::Swap(i, j) => write!(f, "S{}{}", i + 1, j + 1),
            Generator::Gamma(i) => write!(f, "g{}", i + 1),
            Generator::Y(i) => write!(f, "y{}", i + 1),
            Generator::YTilde(i) => write!(f, "yt{}", i + 1),
            Generator::X(i) => write!(f, "X{}", i + 1),
            Generator::XInv(i) => write!(f, "Xi{}", i + 1),
            Generator::Op(name, i) => write!(f, "{name}{}", i + 1),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FaultParseError {
    #[error("fault must look like `y1+1` or `y1+2*X1`, got {0:?}")]
    Syntax(String),
}

/// Single-operator perturbation g ↦ g + c·Id, written `y1+1`, `yt2-1/2`,
/// `X1+1`, `Xi1+1`, `g1+1` or `S1+1` (simple reflection), or g ↦ g + c·h for
/// another generator h, written `y1+X1` or `y1-1/2*X1`.
#[derive(Debug, Clone, PartialEq)]
pub struct Fault {
    pub generator: Generator,
    pub shift: Rational,
    pub by: Option<Generator>,
}

fn parse_generator(token: &str) -> Option<Generator> {
    let digits = token.trim_start_matches(|c: char| c.is_ascii_alphabetic());
    let name = &token[..token.len() - digits.len()];
    let index: usize = digits.parse().ok()?;
    let i = index.checked_sub(1)?;
    Some(match name {
        "y" => Generator::Y(i),
        "yt" => Generator::YTilde(i),
        "X" => Generator::X(i),
        "Xi" => Generator::XInv(i),
        "g" => Generator::Gamma(i),
        "S" => Generator::simple(i),
        _ => return None,
    })
}

impl FromStr for Fault {
    type Err = FaultParseError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let bad = || FaultParseError::Syntax(s.to_string());
        let split = s.find(['+', '-']).ok_or_else(bad)?;
        let (head, tail) = s.split_at(split);
        let generator = parse_generator(head).ok_or_else(bad)?;
        let negative = tail.starts_with('-');
        let body = &tail[1..];
        let (coeff, by) = match body.rsplit_once('*') {
            Some((c, g)) => (c, Some(parse_generator(g).ok_or_else(bad)?)),
            None if body.starts_with(|c: char| c.is_ascii_alphabetic()) => {
                ("1", Some(parse_generator(body).ok_or_else(bad)?))
            }
            None => (body, None),
        };
        let mut shift: Rational = coeff.parse().map_err(|_| bad())?;
        if negative {
            shift = -shift;
        }
        Ok(Fault { generator, shift, by })
    }
}

impl fmt::Display for Fault {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let sign = if self.shift.is_negative() { "-" } else { "+" };
        write!(f, "{}{sign}{}", self.generator, self.shift.abs())?;
        if let Some(h) = self.by {
            write!(f, "*{h}")?;
        }
        Ok(())
    }
}

pub type Word = Vec<Generator>;

/// Formal linear combination of words; zero coefficients are dropped.
#[derive(Clone, PartialEq, Debug)]
pub struct Lin<S> {
    terms: BTreeMap<Word, S>,
}

impl<S: Scalar> Default for Lin<S> {
    fn default() -> Self {
        Lin {
            terms: BTreeMap::new(),
        }
    }
}

impl<S: Scalar> Lin<S> {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn identity() -> Self {
        Self::word(&[])
    }

    pub fn word(gens: &[Generator]) -> Self {
        Self::term(S::one(), gens)
    }

    pub fn g(gen: Generator) -> Self {
        Self::word(&[gen])
    }

    pub fn term(c: S, gens: &[Generator]) -> Self {
        let mut out = Self::zero();
        out.add_term(gens.to_vec(), &c);
        out
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Word, &S)> {
        self.terms.iter()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    fn add_term(&mut self, w: Word, c: &S) {
        if c.is_zero() {
            return;
        }
        let sum = match self.terms.get(&w) {
            Some(old) => old.plus(c),
            None => c.clone(),
        };
        if sum.is_zero() {
            self.terms.remove(&w);
        } else {
            self.terms.insert(w, sum);
        }
    }

    pub fn plus(&self, other: &Lin<S>) -> Lin<S> {
        let mut out = self.clone();
        for (w, c) in &other.terms {
            out.add_term(w.clone(), c);
        }
        out
    }

    pub fn minus(&self, other: &Lin<S>) -> Lin<S> {
        self.plus(&other.negated())
    }

    pub fn negated(&self) -> Lin<S> {
        self.scaled(&S::one().negated())
    }

    pub fn scaled(&self, c: &S) -> Lin<S> {
        let mut out = Lin::zero();
        for (w, a) in &self.terms {
            out.add_term(w.clone(), &a.times(c));
        }
        out
    }

    /// Product in the free algebra: concatenation of words.
    pub fn times(&self, other: &Lin<S>) -> Lin<S> {
        let mut out = Lin::zero();
        for (u, a) in &self.terms {
            for (v, b) in &other.terms {
                let mut w = u.clone();
                w.extend_from_slice(v);
                out.add_term(w, &a.times(b));
            }
        }
        out
    }

    pub fn commutator(a: &Lin<S>, b: &Lin<S>) -> Lin<S> {
        a.times(b).minus(&b.times(a))
    }

    pub fn anticommutator(a: &Lin<S>, b: &Lin<S>) -> Lin<S> {
        a.times(b).plus(&b.times(a))
    }

    pub fn generators(&self) -> impl Iterator<Item = Generator> + '_ {
        self.terms.keys().flat_map(|w| w.iter().copied())
    }
}

impl<S: Scalar> fmt::Display for Lin<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        for (k, (w, c)) in self.terms.iter().enumerate() {
            if k > 0 {
                f.write_str(" + ")?;
            }
            write!(f, "({c})")?;
            if w.is_empty() {
                f.write_str("·e")?;
            }
            for g in w {
                write!(f, "·{g}")?;
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_faults() {
        let f: Fault = "y1+1".parse().unwrap();
        assert_eq!(f.generator, Generator::Y(0));
        assert_eq!(f.shift, Rational::one());
        let f: Fault = "yt2-1/2".parse().unwrap();
        assert_eq!(f.generator, Generator::YTilde(1));
        assert_eq!(f.shift, Rational::new(-1, 2).unwrap());
        assert!("y0+1".parse::<Fault>().is_err());
        assert!("q1+1".parse::<Fault>().is_err());
        assert!("y1".parse::<Fault>().is_err());
        let f: Fault = "y1+X2".parse().unwrap();
        assert_eq!((f.by, f.shift.clone()), (Some(Generator::X(1)), Rational::one()));
        let f: Fault = "y2-3/2*S1".parse().unwrap();
        assert_eq!(f.by, Some(Generator::Swap(0, 1)));
        assert_eq!(f.to_string(), "y2-3/2*S12");
        assert!("y1+2*q1".parse::<Fault>().is_err());
    }

    #[test]
    fn free_algebra_arithmetic() {
        let a = Lin::<Rational>::g(Generator::Y(0));
        let b = Lin::<Rational>::g(Generator::Gamma(0));
        let c = Lin::commutator(&a, &b);
        assert_eq!(c.len(), 2);
        assert!(c.plus(&Lin::commutator(&b, &a)).is_empty());
        assert_eq!(Lin::anticommutator(&a, &a), a.times(&a).scaled(&Rational::integer(2)));
    }
}
