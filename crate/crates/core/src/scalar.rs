//! Exact arithmetic in the field ℚ(i)(√2).
//!
//! An [`ExactScalar`] is `(a + b·i) + (c + d·i)·√2` with `a, b, c, d` reduced
//! big rationals. The field is closed under every construction this crate
//! performs: the symmetric canonical blocks need `i/2` and the transition
//! matrices need `1/√2`.

use std::fmt;
use std::ops::{Add, AddAssign, Mul, Neg, Sub, SubAssign};
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, ParseError, Result};

pub type Rational = BigRational;

pub fn rat(numer: i64, denom: i64) -> Rational {
    Rational::new(BigInt::from(numer), BigInt::from(denom))
}

pub fn rat_int(value: i64) -> Rational {
    Rational::from_integer(BigInt::from(value))
}

#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct ExactScalar {
    a: Rational,
    b: Rational,
    c: Rational,
    d: Rational,
}

impl ExactScalar {
    pub fn new(a: Rational, b: Rational, c: Rational, d: Rational) -> Self {
        Self { a, b, c, d }
    }

    pub fn zero() -> Self {
        Self::default()
    }

    pub fn one() -> Self {
        Self::from_rational(Rational::one())
    }

    pub fn i() -> Self {
        Self::gaussian(Rational::zero(), Rational::one())
    }

    pub fn sqrt2() -> Self {
        Self::new(Rational::zero(), Rational::zero(), Rational::one(), Rational::zero())
    }

    /// `1/√2 = √2/2`.
    pub fn inv_sqrt2() -> Self {
        Self::new(Rational::zero(), Rational::zero(), rat(1, 2), Rational::zero())
    }

    pub fn from_int(value: i64) -> Self {
        Self::from_rational(rat_int(value))
    }

    pub fn from_ratio(numer: i64, denom: i64) -> Self {
        Self::from_rational(rat(numer, denom))
    }

    pub fn from_rational(a: Rational) -> Self {
        Self::gaussian(a, Rational::zero())
    }

    pub fn gaussian(re: Rational, im: Rational) -> Self {
        Self::new(re, im, Rational::zero(), Rational::zero())
    }

    pub fn a(&self) -> &Rational {
        &self.a
    }

    pub fn b(&self) -> &Rational {
        &self.b
    }

    pub fn c(&self) -> &Rational {
        &self.c
    }

    pub fn d(&self) -> &Rational {
        &self.d
    }

    pub fn is_zero(&self) -> bool {
        self.a.is_zero() && self.b.is_zero() && self.c.is_zero() && self.d.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.a.is_one() && self.b.is_zero() && self.c.is_zero() && self.d.is_zero()
    }

    /// True when the value lies in ℚ(i), i.e. carries no √2 part.
    pub fn is_gaussian(&self) -> bool {
        self.c.is_zero() && self.d.is_zero()
    }

    /// Complex conjugation `i ↦ −i`.
    pub fn conj(&self) -> Self {
        Self::new(self.a.clone(), -&self.b, self.c.clone(), -&self.d)
    }

    /// Galois conjugation `√2 ↦ −√2`.
    pub fn conj_sqrt2(&self) -> Self {
        Self::new(self.a.clone(), self.b.clone(), -&self.c, -&self.d)
    }

    pub fn scale(&self, factor: &Rational) -> Self {
        if factor.is_zero() {
            return Self::zero();
        }
        Self::new(
            &self.a * factor,
            &self.b * factor,
            &self.c * factor,
            &self.d * factor,
        )
    }

    pub fn try_inv(&self) -> Result<Self> {
        if self.is_zero() {
            return Err(Error::DivisionByZero);
        }
        // x = u + v√2 with u, v ∈ ℚ(i); 1/x = (u − v√2) / (u² − 2v²).
        let (ur, ui) = (&self.a, &self.b);
        let (vr, vi) = (&self.c, &self.d);
        let two = rat_int(2);
        let (u2r, u2i) = gauss_mul(ur, ui, ur, ui);
        let (v2r, v2i) = gauss_mul(vr, vi, vr, vi);
        let wr = u2r - &two * v2r;
        let wi = u2i - &two * v2i;
        // u² − 2v² ≠ 0 because √2 ∉ ℚ(i).
        let norm = &wr * &wr + &wi * &wi;
        let inv_r = &wr / &norm;
        let inv_i = -(&wi / &norm);
        let (a, b) = gauss_mul(ur, ui, &inv_r, &inv_i);
        let (c, d) = gauss_mul(vr, vi, &inv_r, &inv_i);
        Ok(Self::new(a, b, -c, -d))
    }

    pub fn checked_div(&self, rhs: &Self) -> Result<Self> {
        Ok(self * &rhs.try_inv()?)
    }

    pub fn pow(&self, exp: u32) -> Self {
        let mut acc = Self::one();
        for _ in 0..exp {
            acc = &acc * self;
        }
        acc
    }

    /// Canonical text form, see the crate README for the grammar.
    pub fn format(&self) -> String {
        let mut terms: Vec<(bool, String)> = Vec::new();
        if !self.a.is_zero() {
            terms.push((self.a.is_negative(), fmt_rat(&self.a.abs())));
        }
        if !self.b.is_zero() {
            terms.push((self.b.is_negative(), format!("{} i", fmt_rat(&self.b.abs()))));
        }
        match (self.c.is_zero(), self.d.is_zero()) {
            (true, true) => {}
            (false, true) => {
                terms.push((self.c.is_negative(), format!("{} r2", fmt_rat(&self.c.abs()))));
            }
            (lead_zero, false) => {
                // Leading component carries the overall sign.
                let (lead, tail) = if lead_zero {
                    (&self.d, &self.d)
                } else {
                    (&self.c, &self.d)
                };
                let negative = lead.is_negative();
                let tail = if negative { -tail } else { tail.clone() };
                let head = if lead_zero {
                    "0".to_string()
                } else {
                    fmt_rat(&self.c.abs())
                };
                let op = if tail.is_negative() { '-' } else { '+' };
                terms.push((
                    negative,
                    format!("({head} {op} {} i) r2", fmt_rat(&tail.abs())),
                ));
            }
        }
        if terms.is_empty() {
            return "0".to_string();
        }
        let mut out = String::new();
        for (idx, (negative, body)) in terms.iter().enumerate() {
            if idx == 0 {
                if *negative {
                    out.push('-');
                }
            } else {
                out.push_str(if *negative { " - " } else { " + " });
            }
            out.push_str(body);
        }
        out
    }

    pub fn parse(text: &str) -> Result<Self, ParseError> {
        Parser::new(text).scalar()
    }
}

fn fmt_rat(value: &Rational) -> String {
    if value.is_integer() {
        value.numer().to_string()
    } else {
        format!("{}/{}", value.numer(), value.denom())
    }
}

#[inline]
fn gauss_mul(ar: &Rational, ai: &Rational, br: &Rational, bi: &Rational) -> (Rational, Rational) {
    let a_real = ai.is_zero();
    let b_real = bi.is_zero();
    match (a_real, b_real) {
        (true, true) => (ar * br, Rational::zero()),
        (true, false) => (ar * br, ar * bi),
        (false, true) => (ar * br, ai * br),
        (false, false) => (ar * br - ai * bi, ar * bi + ai * br),
    }
}

impl fmt::Display for ExactScalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.format())
    }
}

impl fmt::Debug for ExactScalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}]", self.format())
    }
}

impl FromStr for ExactScalar {
    type Err = ParseError;

    fn from_str(s: &str) -> Result<Self, ParseError> {
        Self::parse(s)
    }
}

impl From<i64> for ExactScalar {
    fn from(value: i64) -> Self {
        Self::from_int(value)
    }
}

impl From<Rational> for ExactScalar {
    fn from(value: Rational) -> Self {
        Self::from_rational(value)
    }
}

impl<'a> Add<&'a ExactScalar> for &'a ExactScalar {
    type Output = ExactScalar;

    fn add(self, rhs: &ExactScalar) -> ExactScalar {
        ExactScalar::new(
            &self.a + &rhs.a,
            &self.b + &rhs.b,
            &self.c + &rhs.c,
            &self.d + &rhs.d,
        )
    }
}

impl<'a> Sub<&'a ExactScalar> for &'a ExactScalar {
    type Output = ExactScalar;

    fn sub(self, rhs: &ExactScalar) -> ExactScalar {
        ExactScalar::new(
            &self.a - &rhs.a,
            &self.b - &rhs.b,
            &self.c - &rhs.c,
            &self.d - &rhs.d,
        )
    }
}

impl<'a> Mul<&'a ExactScalar> for &'a ExactScalar {
    type Output = ExactScalar;

    fn mul(self, rhs: &ExactScalar) -> ExactScalar {
        if self.is_zero() || rhs.is_zero() {
            return ExactScalar::zero();
        }
        let lhs_g = self.is_gaussian();
        let rhs_g = rhs.is_gaussian();
        if lhs_g && rhs_g {
            let (a, b) = gauss_mul(&self.a, &self.b, &rhs.a, &rhs.b);
            return ExactScalar::gaussian(a, b);
        }
        // (u1 + v1√2)(u2 + v2√2) = u1u2 + 2v1v2 + (u1v2 + v1u2)√2
        let (mut ur, mut ui) = gauss_mul(&self.a, &self.b, &rhs.a, &rhs.b);
        if !lhs_g && !rhs_g {
            let (vr, vi) = gauss_mul(&self.c, &self.d, &rhs.c, &rhs.d);
            ur += &vr + &vr;
            ui += &vi + &vi;
        }
        let (mut cr, mut ci) = (Rational::zero(), Rational::zero());
        if !rhs_g {
            let (r, i) = gauss_mul(&self.a, &self.b, &rhs.c, &rhs.d);
            cr += r;
            ci += i;
        }
        if !lhs_g {
            let (r, i) = gauss_mul(&self.c, &self.d, &rhs.a, &rhs.b);
            cr += r;
            ci += i;
        }
        ExactScalar::new(ur, ui, cr, ci)
    }
}

impl Neg for &ExactScalar {
    type Output = ExactScalar;

    fn neg(self) -> ExactScalar {
        ExactScalar::new(-&self.a, -&self.b, -&self.c, -&self.d)
    }
}

impl Neg for ExactScalar {
    type Output = ExactScalar;

    fn neg(self) -> ExactScalar {
        -&self
    }
}

macro_rules! forward_owned {
    ($tr:ident, $method:ident) => {
        impl $tr<ExactScalar> for ExactScalar {
            type Output = ExactScalar;
            fn $method(self, rhs: ExactScalar) -> ExactScalar {
                (&self).$method(&rhs)
            }
        }
        impl<'a> $tr<&'a ExactScalar> for ExactScalar {
            type Output = ExactScalar;
            fn $method(self, rhs: &ExactScalar) -> ExactScalar {
                (&self).$method(rhs)
            }
        }
        impl<'a> $tr<ExactScalar> for &'a ExactScalar {
            type Output = ExactScalar;
            fn $method(self, rhs: ExactScalar) -> ExactScalar {
                self.$method(&rhs)
            }
        }
    };
}

forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);

impl AddAssign<&ExactScalar> for ExactScalar {
    fn add_assign(&mut self, rhs: &ExactScalar) {
        self.a += &rhs.a;
        self.b += &rhs.b;
        self.c += &rhs.c;
        self.d += &rhs.d;
    }
}

impl SubAssign<&ExactScalar> for ExactScalar {
    fn sub_assign(&mut self, rhs: &ExactScalar) {
        self.a -= &rhs.a;
        self.b -= &rhs.b;
        self.c -= &rhs.c;
        self.d -= &rhs.d;
    }
}

/// Recursive-descent parser for the scalar grammar
///
/// ```text
/// SCALAR := TERM (("+"|"-") TERM)*
/// TERM   := RAT | RAT "i" | "(" RAT ("+"|"-") RAT "i" ")" "r2" | RAT "r2"
/// RAT    := INT ("/" POSINT)?
/// ```
///
/// Accepted extensions: a leading sign, bare `i` / `r2` with implicit
/// coefficient 1, `RAT i r2`, and any ℚ(i) sum inside the parentheses.
struct Parser<'a> {
    src: &'a [u8],
    pos: usize,
}

impl<'a> Parser<'a> {
    fn new(text: &'a str) -> Self {
        Self {
            src: text.as_bytes(),
            pos: 0,
        }
    }

    fn skip_ws(&mut self) {
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.src.get(self.pos).copied()
    }

    fn eat_keyword(&mut self, kw: &str) -> bool {
        self.skip_ws();
        if self.src[self.pos..].starts_with(kw.as_bytes()) {
            self.pos += kw.len();
            true
        } else {
            false
        }
    }

    fn err<T>(&self, message: impl Into<String>) -> Result<T, ParseError> {
        Err(ParseError::new(self.pos, message))
    }

    fn sign(&mut self) -> Option<bool> {
        match self.peek() {
            Some(b'+') => {
                self.pos += 1;
                Some(false)
            }
            Some(b'-') => {
                self.pos += 1;
                Some(true)
            }
            _ => None,
        }
    }

    fn scalar(&mut self) -> Result<ExactScalar, ParseError> {
        if self.peek().is_none() {
            return self.err("empty scalar");
        }
        let negative = self.sign().unwrap_or(false);
        let mut acc = self.term(negative)?;
        loop {
            match self.peek() {
                None => return Ok(acc),
                Some(b'+') | Some(b'-') => {
                    let negative = self.sign().unwrap_or(false);
                    let t = self.term(negative)?;
                    acc += &t;
                }
                Some(c) => return self.err(format!("unexpected character '{}'", c as char)),
            }
        }
    }

    fn digits(&mut self) -> Option<BigInt> {
        self.skip_ws();
        let start = self.pos;
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        if start == self.pos {
            return None;
        }
        let text = std::str::from_utf8(&self.src[start..self.pos]).ok()?;
        text.parse::<BigInt>().ok()
    }

    fn rational(&mut self) -> Result<Option<Rational>, ParseError> {
        let Some(numer) = self.digits() else {
            return Ok(None);
        };
        if self.peek() == Some(b'/') {
            self.pos += 1;
            let at = self.pos;
            match self.digits() {
                Some(den) if !den.is_zero() => Ok(Some(Rational::new(numer, den))),
                Some(_) => Err(ParseError::new(at, "zero denominator")),
                None => Err(ParseError::new(at, "expected denominator")),
            }
        } else {
            Ok(Some(Rational::from_integer(numer)))
        }
    }

    /// Parses an optional rational followed by optional `i`, returning a ℚ(i) value.
    fn gaussian_atom(&mut self) -> Result<Option<(Rational, Rational)>, ParseError> {
        let coeff = self.rational()?;
        let imag = self.eat_keyword("i");
        match (coeff, imag) {
            (None, false) => Ok(None),
            (Some(q), false) => Ok(Some((q, Rational::zero()))),
            (q, true) => Ok(Some((Rational::zero(), q.unwrap_or_else(Rational::one)))),
        }
    }

    fn term(&mut self, negative: bool) -> Result<ExactScalar, ParseError> {
        let value = if self.peek() == Some(b'(') {
            self.pos += 1;
            let (re, im) = self.gaussian_sum()?;
            if self.peek() != Some(b')') {
                return self.err("expected ')'");
            }
            self.pos += 1;
            if !self.eat_keyword("r2") {
                return self.err("expected 'r2' after parenthesised coefficient");
            }
            ExactScalar::new(Rational::zero(), Rational::zero(), re, im)
        } else {
            let at = self.pos;
            let atom = self.gaussian_atom()?;
            let root = self.eat_keyword("r2");
            match (atom, root) {
                (None, false) => return Err(ParseError::new(at, "expected a term")),
                (None, true) => ExactScalar::sqrt2(),
                (Some((re, im)), false) => ExactScalar::gaussian(re, im),
                (Some((re, im)), true) => {
                    ExactScalar::new(Rational::zero(), Rational::zero(), re, im)
                }
            }
        };
        Ok(if negative { -value } else { value })
    }

    fn gaussian_sum(&mut self) -> Result<(Rational, Rational), ParseError> {
        let mut re = Rational::zero();
        let mut im = Rational::zero();
        let mut first = true;
        loop {
            let negative = match self.sign() {
                Some(n) => n,
                None if first => false,
                None => return Ok((re, im)),
            };
            first = false;
            let at = self.pos;
            let Some((r, i)) = self.gaussian_atom()? else {
                return Err(ParseError::new(at, "expected a rational inside parentheses"));
            };
            if negative {
                re -= r;
                im -= i;
            } else {
                re += r;
                im += i;
            }
            if !matches!(self.peek(), Some(b'+') | Some(b'-')) {
                return Ok((re, im));
            }
        }
    }
}
