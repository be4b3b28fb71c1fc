//! Sparse Laurent polynomials in one variable `v` with integer coefficients.

use std::fmt;
use std::ops::{Add, AddAssign, Mul, Neg, Sub, SubAssign};

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::int::Int;

/// Degree of a Laurent polynomial. The zero polynomial has degree `NegInf`,
/// which sorts below every finite degree and absorbs integer shifts.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Degree {
    NegInf,
    Finite(i64),
}

impl Degree {
    pub fn finite(self) -> Option<i64> {
        match self {
            Degree::NegInf => None,
            Degree::Finite(d) => Some(d),
        }
    }
}

impl Add<i64> for Degree {
    type Output = Degree;
    fn add(self, rhs: i64) -> Degree {
        match self {
            Degree::NegInf => Degree::NegInf,
            Degree::Finite(d) => Degree::Finite(d + rhs),
        }
    }
}

impl Add for Degree {
    type Output = Degree;
    fn add(self, rhs: Degree) -> Degree {
        match (self, rhs) {
            (Degree::Finite(a), Degree::Finite(b)) => Degree::Finite(a + b),
            _ => Degree::NegInf,
        }
    }
}

impl fmt::Display for Degree {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Degree::NegInf => write!(f, "-inf"),
            Degree::Finite(d) => write!(f, "{d}"),
        }
    }
}

/// An element of `Z[v, v^-1]`.
///
/// Terms are kept sorted by strictly decreasing exponent and never carry a zero
/// coefficient, so structural equality is polynomial equality.
#[derive(Clone, Default, PartialEq, Eq, Hash)]
pub struct LaurentPoly {
    terms: Vec<(i64, Int)>,
}

impl LaurentPoly {
    pub fn zero() -> Self {
        LaurentPoly { terms: Vec::new() }
    }

    pub fn one() -> Self {
        Self::monomial(1, 0)
    }

    /// `c * v^e`.
    pub fn monomial(c: impl Into<Int>, e: i64) -> Self {
        let c = c.into();
        if c.is_zero() {
            Self::zero()
        } else {
            LaurentPoly { terms: vec![(e, c)] }
        }
    }

    /// `v^e`.
    pub fn v_pow(e: i64) -> Self {
        Self::monomial(1, e)
    }

    /// Build from arbitrary `(exponent, coefficient)` pairs; repeated exponents
    /// are summed.
    pub fn from_terms<I, C>(terms: I) -> Self
    where
        I: IntoIterator<Item = (i64, C)>,
        C: Into<Int>,
    {
        let mut v: Vec<(i64, Int)> = terms.into_iter().map(|(e, c)| (e, c.into())).collect();
        v.sort_by_key(|t| std::cmp::Reverse(t.0));
        let mut out: Vec<(i64, Int)> = Vec::with_capacity(v.len());
        for (e, c) in v {
            match out.last_mut() {
                Some((le, lc)) if *le == e => *lc += &c,
                _ => out.push((e, c)),
            }
        }
        out.retain(|(_, c)| !c.is_zero());
        LaurentPoly { terms: out }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.terms.len() == 1 && self.terms[0].0 == 0 && self.terms[0].1.is_one()
    }

    /// Terms in decreasing exponent order.
    pub fn terms(&self) -> &[(i64, Int)] {
        &self.terms
    }

    pub fn degree(&self) -> Degree {
        self.terms.first().map_or(Degree::NegInf, |(e, _)| Degree::Finite(*e))
    }

    /// Lowest exponent present, `None` for zero.
    pub fn valuation(&self) -> Option<i64> {
        self.terms.last().map(|(e, _)| *e)
    }

    /// Coefficient of the highest power, zero for the zero polynomial.
    pub fn leading_coeff(&self) -> Int {
        self.terms.first().map_or(Int::ZERO, |(_, c)| c.clone())
    }

    /// `pi_n`: the coefficient of `v^n`.
    pub fn coeff(&self, n: i64) -> Int {
        match self.terms.binary_search_by(|(e, _)| n.cmp(e)) {
            Ok(i) => self.terms[i].1.clone(),
            Err(_) => Int::ZERO,
        }
    }

    /// Degree together with the coefficient of `v^n`.
    pub fn degree_and_coeff(&self, n: i64) -> (Degree, Int) {
        (self.degree(), self.coeff(n))
    }

    /// The bar involution `v^n -> v^-n`.
    pub fn bar(&self) -> Self {
        LaurentPoly {
            terms: self.terms.iter().rev().map(|(e, c)| (-e, c.clone())).collect(),
        }
    }

    /// Multiply by `v^k`.
    pub fn shift(&self, k: i64) -> Self {
        LaurentPoly {
            terms: self.terms.iter().map(|(e, c)| (e + k, c.clone())).collect(),
        }
    }

    pub fn scale(&self, c: &Int) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        LaurentPoly {
            terms: self.terms.iter().map(|(e, x)| (*e, x * c)).collect(),
        }
    }

    /// Part of strictly negative degree.
    pub fn negative_part(&self) -> Self {
        LaurentPoly {
            terms: self.terms.iter().filter(|(e, _)| *e < 0).cloned().collect(),
        }
    }

    /// Part of degree `>= 0`.
    pub fn nonnegative_part(&self) -> Self {
        LaurentPoly {
            terms: self.terms.iter().filter(|(e, _)| *e >= 0).cloned().collect(),
        }
    }

    /// True when every exponent is `<= -1`, i.e. the polynomial lies in `v^-1 Z[v^-1]`.
    pub fn is_strictly_negative(&self) -> bool {
        self.terms.first().is_none_or(|(e, _)| *e < 0)
    }

    pub fn is_bar_invariant(&self) -> bool {
        *self == self.bar()
    }

    /// Evaluate the bar-symmetric completion of the non-negative part:
    /// the unique bar-invariant polynomial agreeing with `self` in degrees `>= 0`.
    pub fn symmetric_completion(&self) -> Self {
        let mut terms = Vec::new();
        for (e, c) in &self.terms {
            if *e > 0 {
                terms.push((*e, c.clone()));
                terms.push((-*e, c.clone()));
            } else if *e == 0 {
                terms.push((0, c.clone()));
            }
        }
        Self::from_terms(terms)
    }

    /// `self += c * other`.
    pub fn add_scaled(&mut self, other: &LaurentPoly, c: &LaurentPoly) {
        if other.is_zero() || c.is_zero() {
            return;
        }
        let prod = other * c;
        *self += &prod;
    }

    fn merge(a: &[(i64, Int)], b: &[(i64, Int)], negate_b: bool) -> Vec<(i64, Int)> {
        let mut out = Vec::with_capacity(a.len() + b.len());
        let (mut i, mut j) = (0, 0);
        while i < a.len() || j < b.len() {
            if j == b.len() || (i < a.len() && a[i].0 > b[j].0) {
                out.push(a[i].clone());
                i += 1;
            } else if i == a.len() || b[j].0 > a[i].0 {
                let c = if negate_b { -&b[j].1 } else { b[j].1.clone() };
                out.push((b[j].0, c));
                j += 1;
            } else {
                let c = if negate_b { &a[i].1 - &b[j].1 } else { &a[i].1 + &b[j].1 };
                if !c.is_zero() {
                    out.push((a[i].0, c));
                }
                i += 1;
                j += 1;
            }
        }
        out
    }
}

impl Add<&LaurentPoly> for &LaurentPoly {
    type Output = LaurentPoly;
    fn add(self, rhs: &LaurentPoly) -> LaurentPoly {
        LaurentPoly {
            terms: LaurentPoly::merge(&self.terms, &rhs.terms, false),
        }
    }
}

impl Sub<&LaurentPoly> for &LaurentPoly {
    type Output = LaurentPoly;
    fn sub(self, rhs: &LaurentPoly) -> LaurentPoly {
        LaurentPoly {
            terms: LaurentPoly::merge(&self.terms, &rhs.terms, true),
        }
    }
}

impl Mul<&LaurentPoly> for &LaurentPoly {
    type Output = LaurentPoly;
    fn mul(self, rhs: &LaurentPoly) -> LaurentPoly {
        if self.is_zero() || rhs.is_zero() {
            return LaurentPoly::zero();
        }
        if rhs.terms.len() == 1 {
            let (e, c) = &rhs.terms[0];
            return LaurentPoly {
                terms: self.terms.iter().map(|(a, x)| (a + e, x * c)).collect(),
            };
        }
        let hi = self.terms[0].0 + rhs.terms[0].0;
        let lo = self.terms.last().unwrap().0 + rhs.terms.last().unwrap().0;
        let width = (hi - lo + 1) as usize;
        // dense accumulation is cheap: exponent ranges stay small here
        if width <= 4096 {
            let mut acc = vec![Int::ZERO; width];
            for (a, x) in &self.terms {
                for (b, y) in &rhs.terms {
                    let idx = (hi - (a + b)) as usize;
                    acc[idx] += &(x * y);
                }
            }
            let terms = acc
                .into_iter()
                .enumerate()
                .filter(|(_, c)| !c.is_zero())
                .map(|(i, c)| (hi - i as i64, c))
                .collect();
            LaurentPoly { terms }
        } else {
            LaurentPoly::from_terms(
                self.terms
                    .iter()
                    .flat_map(|(a, x)| rhs.terms.iter().map(move |(b, y)| (a + b, x * y))),
            )
        }
    }
}

impl Neg for &LaurentPoly {
    type Output = LaurentPoly;
    fn neg(self) -> LaurentPoly {
        LaurentPoly {
            terms: self.terms.iter().map(|(e, c)| (*e, -c)).collect(),
        }
    }
}

impl Add for LaurentPoly {
    type Output = LaurentPoly;
    fn add(self, rhs: LaurentPoly) -> LaurentPoly {
        &self + &rhs
    }
}

impl Sub for LaurentPoly {
    type Output = LaurentPoly;
    fn sub(self, rhs: LaurentPoly) -> LaurentPoly {
        &self - &rhs
    }
}

impl Mul for LaurentPoly {
    type Output = LaurentPoly;
    fn mul(self, rhs: LaurentPoly) -> LaurentPoly {
        &self * &rhs
    }
}

impl Neg for LaurentPoly {
    type Output = LaurentPoly;
    fn neg(self) -> LaurentPoly {
        -&self
    }
}

impl AddAssign<&LaurentPoly> for LaurentPoly {
    fn add_assign(&mut self, rhs: &LaurentPoly) {
        if rhs.is_zero() {
            return;
        }
        if self.is_zero() {
            *self = rhs.clone();
            return;
        }
        self.terms = LaurentPoly::merge(&self.terms, &rhs.terms, false);
    }
}

impl SubAssign<&LaurentPoly> for LaurentPoly {
    fn sub_assign(&mut self, rhs: &LaurentPoly) {
        if rhs.is_zero() {
            return;
        }
        self.terms = LaurentPoly::merge(&self.terms, &rhs.terms, true);
    }
}

impl fmt::Display for LaurentPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        for (i, (e, c)) in self.terms.iter().enumerate() {
            let neg = c.signum() < 0;
            let abs = if neg { -c } else { c.clone() };
            if i == 0 {
                if neg {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {} ", if neg { '-' } else { '+' })?;
            }
            match (*e, abs.is_one()) {
                (0, _) => write!(f, "{abs}")?,
                (1, true) => write!(f, "v")?,
                (1, false) => write!(f, "{abs}v")?,
                (e, true) => write!(f, "v^{e}")?,
                (e, false) => write!(f, "{abs}v^{e}")?,
            }
        }
        Ok(())
    }
}

impl fmt::Debug for LaurentPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "LaurentPoly({self})")
    }
}

// Wire format: list of [exponent, coefficient] pairs, descending exponent.
impl Serialize for LaurentPoly {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        self.terms.serialize(s)
    }
}

impl<'de> Deserialize<'de> for LaurentPoly {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let terms: Vec<(i64, Int)> = Vec::deserialize(d)?;
        Ok(LaurentPoly::from_terms(terms))
    }
}
