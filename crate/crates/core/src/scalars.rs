//! Exact scalars: rationals, rational functions in `q`, and q-integers.
//!
//! Every algorithm in the crate is generic over [`Field`]. Two fields are
//! provided: [`Rational`] (the deformation parameter sampled at a rational
//! point) and [`QScalar`] (the deformation parameter kept symbolic).

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use rand::Rng;
use thiserror::Error;

/// Arbitrary precision rational number.
pub type Rational = BigRational;

/// Shorthand for the rational `n/d`.
pub fn rat(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ScalarError {
    #[error("denominator {den} vanishes at q = {at}")]
    VanishingDenominator { den: String, at: String },
    #[error("cannot parse scalar {input:?}: {reason}")]
    Parse { input: String, reason: String },
}

/// A commutative field with exact arithmetic.
///
/// Methods take references so that big-number values are never moved by
/// accident; the names avoid clashing with `std::ops`.
pub trait Field: Clone + PartialEq + fmt::Debug + fmt::Display + Send + Sync + 'static {
    fn zero() -> Self;
    fn one() -> Self;
    fn is_zero(&self) -> bool;
    fn from_rational(r: &Rational) -> Self;
    fn plus(&self, o: &Self) -> Self;
    fn minus(&self, o: &Self) -> Self;
    fn times(&self, o: &Self) -> Self;
    fn negated(&self) -> Self;
    /// Multiplicative inverse, `None` for zero.
    fn inverse(&self) -> Option<Self>;

    fn is_one(&self) -> bool {
        *self == Self::one()
    }

    fn from_int(v: i64) -> Self {
        Self::from_rational(&Rational::from_integer(BigInt::from(v)))
    }

    /// Panics on division by zero; callers check denominators first.
    fn over(&self, o: &Self) -> Self {
        self.times(&o.inverse().expect("division by zero"))
    }

    fn add_assign(&mut self, o: &Self) {
        *self = self.plus(o);
    }

    fn pow(&self, e: i64) -> Self {
        let mut base = if e < 0 {
            self.inverse().expect("negative power of zero")
        } else {
            self.clone()
        };
        let mut k = e.unsigned_abs();
        let mut acc = Self::one();
        while k > 0 {
            if k & 1 == 1 {
                acc = acc.times(&base);
            }
            k >>= 1;
            if k > 0 {
                base = base.times(&base);
            }
        }
        acc
    }
}

impl Field for Rational {
    fn zero() -> Self {
        Zero::zero()
    }
    fn one() -> Self {
        One::one()
    }
    fn is_zero(&self) -> bool {
        Zero::is_zero(self)
    }
    fn from_rational(r: &Rational) -> Self {
        r.clone()
    }
    fn plus(&self, o: &Self) -> Self {
        self + o
    }
    fn minus(&self, o: &Self) -> Self {
        self - o
    }
    fn times(&self, o: &Self) -> Self {
        self * o
    }
    fn negated(&self) -> Self {
        -self
    }
    fn inverse(&self) -> Option<Self> {
        if Zero::is_zero(self) {
            None
        } else {
            Some(self.recip())
        }
    }
    fn add_assign(&mut self, o: &Self) {
        *self += o;
    }
}

/// The q-integer `m_q = (q^m - q^-m)/(q - q^-1)` in any field, computed as
/// the division-free sum `q^(m-1) + q^(m-3) + ... + q^(1-m)`.
pub fn qint<F: Field>(m: i64, q: &F) -> F {
    let k = m.unsigned_abs() as i64;
    let mut acc = F::zero();
    if k == 0 {
        return acc;
    }
    let q2 = q.times(q);
    let mut term = q.pow(k - 1);
    let q2inv = q2.inverse().expect("q must be nonzero");
    for _ in 0..k {
        acc.add_assign(&term);
        term = term.times(&q2inv);
    }
    if m < 0 {
        acc.negated()
    } else {
        acc
    }
}

/// `zeta = q - q^-1`.
pub fn zeta<F: Field>(q: &F) -> F {
    q.minus(&q.inverse().expect("q must be nonzero"))
}

/// `p_q! = 1_q 2_q ... p_q`.
pub fn qfactorial<F: Field>(p: u32, q: &F) -> F {
    (1..=p as i64).fold(F::one(), |acc, i| acc.times(&qint(i, q)))
}

/// Gaussian binomial `p_q!/(k_q!(p-k)_q!)`, zero outside `0..=p`.
pub fn qbinomial<F: Field>(p: u32, k: i64, q: &F) -> F {
    if k < 0 || k > p as i64 {
        return F::zero();
    }
    let k = k as u32;
    qfactorial(p, q).over(&qfactorial(k, q).times(&qfactorial(p - k, q)))
}

/// Elementary symmetric function `e_k(t)`; `e_0 = 1`, zero for `k > len`.
pub fn elementary_symmetric<F: Field>(t: &[F], k: usize) -> F {
    // Row of the generating product prod (1 + t_i x).
    let mut e = vec![F::zero(); t.len() + 1];
    e[0] = F::one();
    for (i, ti) in t.iter().enumerate() {
        for j in (1..=i + 1).rev() {
            let add = e[j - 1].times(ti);
            e[j].add_assign(&add);
        }
    }
    e.get(k).cloned().unwrap_or_else(F::zero)
}

/// Random rational with numerator and denominator bounded by `bound` in
/// absolute value, excluding `0` and `±1` (the PIT sampling policy).
pub fn sample_q<R: Rng + ?Sized>(rng: &mut R, bound: i64) -> Rational {
    loop {
        let n = rng.gen_range(-bound..=bound);
        let d = rng.gen_range(1..=bound);
        let r = rat(n, d);
        if !Zero::is_zero(&r) && r.abs() != <Rational as One>::one() {
            return r;
        }
    }
}

/// Random rational with the same bound, zero allowed.
pub fn sample_rational<R: Rng + ?Sized>(rng: &mut R, bound: i64) -> Rational {
    rat(rng.gen_range(-bound..=bound), rng.gen_range(1..=bound))
}

// ---------------------------------------------------------------------------
// Polynomials over Q

/// Dense univariate polynomial, coefficients from degree 0 upward, trimmed.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Poly(Vec<Rational>);

impl Poly {
    fn new(mut c: Vec<Rational>) -> Self {
        while c.last().is_some_and(Zero::is_zero) {
            c.pop();
        }
        Poly(c)
    }

    fn zero() -> Self {
        Poly(Vec::new())
    }

    fn constant(r: Rational) -> Self {
        Poly::new(vec![r])
    }

    fn is_zero(&self) -> bool {
        self.0.is_empty()
    }

    pub fn coeffs(&self) -> &[Rational] {
        &self.0
    }

    fn degree(&self) -> usize {
        self.0.len().saturating_sub(1)
    }

    fn valuation(&self) -> usize {
        self.0.iter().take_while(|c| Zero::is_zero(*c)).count()
    }

    fn drop_low(&self, v: usize) -> Self {
        Poly(self.0[v..].to_vec())
    }

    fn raise(&self, v: usize) -> Self {
        if self.is_zero() {
            return Poly::zero();
        }
        let mut c = vec![<Rational as Zero>::zero(); v];
        c.extend(self.0.iter().cloned());
        Poly(c)
    }

    fn add(&self, o: &Self) -> Self {
        let n = self.0.len().max(o.0.len());
        let mut c = Vec::with_capacity(n);
        for i in 0..n {
            let a = self.0.get(i);
            let b = o.0.get(i);
            c.push(match (a, b) {
                (Some(a), Some(b)) => a + b,
                (Some(a), None) => a.clone(),
                (None, Some(b)) => b.clone(),
                (None, None) => unreachable!(),
            });
        }
        Poly::new(c)
    }

    fn neg(&self) -> Self {
        Poly(self.0.iter().map(|c| -c).collect())
    }

    fn mul(&self, o: &Self) -> Self {
        if self.is_zero() || o.is_zero() {
            return Poly::zero();
        }
        let mut c = vec![<Rational as Zero>::zero(); self.0.len() + o.0.len() - 1];
        for (i, a) in self.0.iter().enumerate() {
            if Zero::is_zero(a) {
                continue;
            }
            for (j, b) in o.0.iter().enumerate() {
                c[i + j] += a * b;
            }
        }
        Poly::new(c)
    }

    fn scale(&self, r: &Rational) -> Self {
        Poly::new(self.0.iter().map(|c| c * r).collect())
    }

    fn divrem(&self, d: &Self) -> (Self, Self) {
        assert!(!d.is_zero(), "polynomial division by zero");
        if self.0.len() < d.0.len() {
            return (Poly::zero(), self.clone());
        }
        let lead = d.0.last().unwrap();
        let mut rem = self.0.clone();
        let mut quo = vec![<Rational as Zero>::zero(); self.0.len() - d.0.len() + 1];
        for k in (0..quo.len()).rev() {
            let c = &rem[k + d.0.len() - 1] / lead;
            if !Zero::is_zero(&c) {
                for (j, dj) in d.0.iter().enumerate() {
                    rem[k + j] -= &c * dj;
                }
            }
            quo[k] = c;
        }
        (Poly::new(quo), Poly::new(rem))
    }

    fn monic(&self) -> Self {
        match self.0.last() {
            Some(l) => self.scale(&l.recip()),
            None => Poly::zero(),
        }
    }

    fn gcd(&self, o: &Self) -> Self {
        let (mut a, mut b) = (self.clone(), o.clone());
        while !b.is_zero() {
            let r = a.divrem(&b).1;
            a = b;
            b = r.monic();
        }
        a.monic()
    }

    fn eval(&self, x: &Rational) -> Rational {
        let mut acc = <Rational as Zero>::zero();
        for c in self.0.iter().rev() {
            acc = acc * x + c;
        }
        acc
    }
}

// ---------------------------------------------------------------------------
// Rational functions in q

/// Exact element of Q(q) in canonical form `q^shift * num(q) / den(q)`.
///
/// Canonical form: `num` and `den` are coprime ordinary polynomials with
/// nonzero constant terms, and `den(0) = 1`. Zero is `num = 0, den = 1,
/// shift = 0`. Equal values therefore have identical representations.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct QScalar {
    num: Poly,
    den: Poly,
    shift: i64,
}

impl QScalar {
    /// The indeterminate `q`.
    pub fn q() -> Self {
        QScalar::monomial(<Rational as One>::one(), 1)
    }

    /// `c * q^e`.
    pub fn monomial(c: Rational, e: i64) -> Self {
        if Zero::is_zero(&c) {
            return <QScalar as Field>::zero();
        }
        QScalar {
            num: Poly::constant(c),
            den: Poly::constant(<Rational as One>::one()),
            shift: e,
        }
    }

    /// Build from Laurent terms `(exponent, coefficient)`.
    pub fn from_terms(terms: &[(i64, Rational)]) -> Self {
        terms.iter().fold(<QScalar as Field>::zero(), |acc, (e, c)| {
            acc.plus(&QScalar::monomial(c.clone(), *e))
        })
    }

    fn make(num: Poly, den: Poly, shift: i64) -> Self {
        assert!(!den.is_zero(), "zero denominator");
        if num.is_zero() {
            return <QScalar as Field>::zero();
        }
        let (vn, vd) = (num.valuation(), den.valuation());
        let mut num = num.drop_low(vn);
        let mut den = den.drop_low(vd);
        let shift = shift + vn as i64 - vd as i64;
        if den.degree() > 0 {
            let g = num.gcd(&den);
            if g.degree() > 0 {
                num = num.divrem(&g).0;
                den = den.divrem(&g).0;
            }
        }
        let c = den.0[0].recip();
        QScalar {
            num: num.scale(&c),
            den: den.scale(&c),
            shift,
        }
    }

    /// True when the denominator is 1, i.e. the value is a Laurent polynomial.
    pub fn is_laurent(&self) -> bool {
        self.den.degree() == 0
    }

    /// Laurent terms `(exponent, coefficient)` with ascending exponents;
    /// `None` unless [`is_laurent`](Self::is_laurent).
    pub fn laurent_terms(&self) -> Option<Vec<(i64, Rational)>> {
        if !self.is_laurent() {
            return None;
        }
        Some(
            self.num
                .0
                .iter()
                .enumerate()
                .filter(|(_, c)| !Zero::is_zero(*c))
                .map(|(i, c)| (self.shift + i as i64, c.clone()))
                .collect(),
        )
    }

    /// Numerator as a Laurent polynomial `q^shift * num`.
    pub fn numerator(&self) -> QScalar {
        QScalar {
            num: self.num.clone(),
            den: Poly::constant(<Rational as One>::one()),
            shift: if self.num.is_zero() { 0 } else { self.shift },
        }
    }

    /// Denominator as an ordinary polynomial with constant term 1.
    pub fn denominator(&self) -> QScalar {
        QScalar {
            num: self.den.clone(),
            den: Poly::constant(<Rational as One>::one()),
            shift: 0,
        }
    }

    /// Evaluate at `q = q0`.
    pub fn eval_at(&self, q0: &Rational) -> Result<Rational, ScalarError> {
        if self.num.is_zero() {
            return Ok(<Rational as Zero>::zero());
        }
        let vanishing = || ScalarError::VanishingDenominator {
            den: self.denominator().to_string(),
            at: q0.to_string(),
        };
        if Zero::is_zero(q0) {
            return Err(vanishing());
        }
        let d = self.den.eval(q0);
        if Zero::is_zero(&d) {
            return Err(vanishing());
        }
        Ok(self.num.eval(q0) / d * Field::pow(q0, self.shift))
    }

    /// Substitute `q` by an element of another field; `None` when the
    /// denominator vanishes there. With `F = QScalar` and `q = q()` this is
    /// the identity.
    pub fn eval_in<F: Field>(&self, q: &F) -> Option<F> {
        let horner = |p: &Poly| {
            p.0.iter().rev().fold(F::zero(), |acc, c| {
                acc.times(q).plus(&F::from_rational(c))
            })
        };
        if self.num.is_zero() {
            return Some(F::zero());
        }
        let d = horner(&self.den);
        let qs = if self.shift < 0 { q.inverse()?.pow(-self.shift) } else { q.pow(self.shift) };
        Some(horner(&self.num).times(&qs).times(&d.inverse()?))
    }
}

/// Free-function form of [`QScalar::eval_at`].
pub fn eval_at(s: &QScalar, q0: &Rational) -> Result<Rational, ScalarError> {
    s.eval_at(q0)
}

/// `m_q` as a canonical element of Q(q).
pub fn q_int(m: i64) -> QScalar {
    qint(m, &QScalar::q())
}

/// Gaussian binomial as a Laurent polynomial in q.
pub fn q_binomial(p: u32, k: i64) -> QScalar {
    qbinomial(p, k, &QScalar::q())
}

impl Field for QScalar {
    fn zero() -> Self {
        QScalar {
            num: Poly::zero(),
            den: Poly::constant(<Rational as One>::one()),
            shift: 0,
        }
    }
    fn one() -> Self {
        QScalar::monomial(<Rational as One>::one(), 0)
    }
    fn is_zero(&self) -> bool {
        self.num.is_zero()
    }
    fn from_rational(r: &Rational) -> Self {
        QScalar::monomial(r.clone(), 0)
    }
    fn plus(&self, o: &Self) -> Self {
        if self.is_zero() {
            return o.clone();
        }
        if o.is_zero() {
            return self.clone();
        }
        let s = self.shift.min(o.shift);
        let a = self.num.raise((self.shift - s) as usize);
        let b = o.num.raise((o.shift - s) as usize);
        if self.den == o.den {
            QScalar::make(a.add(&b), self.den.clone(), s)
        } else {
            QScalar::make(
                a.mul(&o.den).add(&b.mul(&self.den)),
                self.den.mul(&o.den),
                s,
            )
        }
    }
    fn minus(&self, o: &Self) -> Self {
        self.plus(&o.negated())
    }
    fn times(&self, o: &Self) -> Self {
        if self.is_zero() || o.is_zero() {
            return <QScalar as Field>::zero();
        }
        if self.is_laurent() && o.is_laurent() {
            // Product of polynomials with nonzero constant terms keeps the
            // canonical shape.
            return QScalar {
                num: self.num.mul(&o.num),
                den: Poly::constant(<Rational as One>::one()),
                shift: self.shift + o.shift,
            };
        }
        QScalar::make(
            self.num.mul(&o.num),
            self.den.mul(&o.den),
            self.shift + o.shift,
        )
    }
    fn negated(&self) -> Self {
        QScalar {
            num: self.num.neg(),
            den: self.den.clone(),
            shift: self.shift,
        }
    }
    fn inverse(&self) -> Option<Self> {
        if self.is_zero() {
            return None;
        }
        Some(QScalar::make(self.den.clone(), self.num.clone(), -self.shift))
    }
}

fn fmt_terms(terms: &[(i64, Rational)]) -> String {
    if terms.is_empty() {
        return "0".to_string();
    }
    let mut out = String::new();
    for (idx, (e, c)) in terms.iter().enumerate() {
        let neg = c.is_negative();
        let a = c.abs();
        if idx == 0 {
            if neg {
                out.push('-');
            }
        } else {
            out.push_str(if neg { " - " } else { " + " });
        }
        let qpart = match *e {
            0 => String::new(),
            1 => "q".to_string(),
            e => format!("q^{e}"),
        };
        if qpart.is_empty() {
            out.push_str(&a.to_string());
        } else if One::is_one(&a) {
            out.push_str(&qpart);
        } else {
            out.push_str(&format!("{a}*{qpart}"));
        }
    }
    out
}

impl fmt::Display for QScalar {
    /// Canonical text: a Laurent sum such as `q^-1 + 2 - 3/2*q^3`, or
    /// `(numerator)/(denominator)` when the denominator is not 1.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.laurent_terms() {
            Some(t) => f.write_str(&fmt_terms(&t)),
            None => {
                let n = self.numerator().laurent_terms().unwrap();
                let d = self.denominator().laurent_terms().unwrap();
                write!(f, "({})/({})", fmt_terms(&n), fmt_terms(&d))
            }
        }
    }
}

impl fmt::Debug for QScalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "QScalar({self})")
    }
}

struct Parser<'a> {
    s: &'a [u8],
    pos: usize,
    input: &'a str,
}

impl Parser<'_> {
    fn err(&self, reason: impl Into<String>) -> ScalarError {
        ScalarError::Parse {
            input: self.input.to_string(),
            reason: format!("{} at offset {}", reason.into(), self.pos),
        }
    }

    fn peek(&self) -> Option<u8> {
        self.s.get(self.pos).copied()
    }

    fn eat(&mut self, c: u8) -> bool {
        if self.peek() == Some(c) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn uint(&mut self) -> Result<BigInt, ScalarError> {
        let start = self.pos;
        while self.peek().is_some_and(|c| c.is_ascii_digit()) {
            self.pos += 1;
        }
        if start == self.pos {
            return Err(self.err("expected digits"));
        }
        let txt = std::str::from_utf8(&self.s[start..self.pos]).unwrap();
        Ok(txt.parse().unwrap())
    }

    fn exponent(&mut self) -> Result<i64, ScalarError> {
        if !self.eat(b'^') {
            return Ok(1);
        }
        let neg = if self.eat(b'-') {
            true
        } else {
            self.eat(b'+');
            false
        };
        let v: i64 = self
            .uint()?
            .try_into()
            .map_err(|_| self.err("exponent out of range"))?;
        Ok(if neg { -v } else { v })
    }

    /// One unsigned term: `c`, `c*q^e`, `q^e`.
    fn term(&mut self) -> Result<(i64, Rational), ScalarError> {
        if self.eat(b'q') {
            return Ok((self.exponent()?, <Rational as One>::one()));
        }
        let n = self.uint()?;
        let d = if self.eat(b'/') { self.uint()? } else { BigInt::one() };
        if d.is_zero() {
            return Err(self.err("zero denominator"));
        }
        let c = Rational::new(n, d);
        if self.eat(b'*') {
            if !self.eat(b'q') {
                return Err(self.err("expected q after *"));
            }
            return Ok((self.exponent()?, c));
        }
        Ok((0, c))
    }

    fn sum(&mut self) -> Result<QScalar, ScalarError> {
        let mut terms = Vec::new();
        let mut first = true;
        loop {
            let neg = if self.eat(b'-') {
                true
            } else if self.eat(b'+') {
                false
            } else if first {
                false
            } else {
                break;
            };
            first = false;
            let (e, c) = self.term()?;
            terms.push((e, if neg { -c } else { c }));
        }
        Ok(QScalar::from_terms(&terms))
    }

    fn expr(&mut self) -> Result<QScalar, ScalarError> {
        if self.eat(b'(') {
            let n = self.sum()?;
            if !self.eat(b')') || !self.eat(b'/') || !self.eat(b'(') {
                return Err(self.err("expected ')/('"));
            }
            let d = self.sum()?;
            if !self.eat(b')') {
                return Err(self.err("expected ')'"));
            }
            return d
                .inverse()
                .map(|di| n.times(&di))
                .ok_or_else(|| self.err("zero denominator"));
        }
        self.sum()
    }
}

impl FromStr for QScalar {
    type Err = ScalarError;

    /// Parse `q^-1 + 2 - 3/2*q^3` style sums, or `(A)/(B)` with sums A, B.
    fn from_str(input: &str) -> Result<Self, Self::Err> {
        let compact: String = input.chars().filter(|c| !c.is_whitespace()).collect();
        let mut p = Parser {
            s: compact.as_bytes(),
            pos: 0,
            input,
        };
        if compact.is_empty() {
            return Err(p.err("empty input"));
        }
        let v = p.expr()?;
        if p.pos != compact.len() {
            return Err(p.err("trailing characters"));
        }
        Ok(v)
    }
}

/// Parse a rational literal such as `-3/2` or `5`.
pub fn parse_rational(s: &str) -> Result<Rational, ScalarError> {
    let err = |r: &str| ScalarError::Parse {
        input: s.to_string(),
        reason: r.to_string(),
    };
    let t = s.trim();
    let (n, d) = match t.split_once('/') {
        Some((n, d)) => (n.trim(), d.trim()),
        None => (t, "1"),
    };
    let n: BigInt = n.parse().map_err(|_| err("bad numerator"))?;
    let d: BigInt = d.parse().map_err(|_| err("bad denominator"))?;
    if d.is_zero() {
        return Err(err("zero denominator"));
    }
    Ok(Rational::new(n, d))
}
