//! Exact scalars: the rationals, prime fields of odd characteristic, and a single
//! quadratic layer `base(w)` with `w^2 = d` over either of them.
//!
//! Every [`Scalar`] carries its [`ScalarDomain`], so equality is structural and
//! mixing domains is detected. The `std::ops` impls panic on a domain mismatch;
//! use [`arith`] or the `try_*` methods for a checked variant.

use std::fmt;
use std::ops::{Add, AddAssign, Mul, MulAssign, Neg, Sub, SubAssign};
use std::str::FromStr;
use std::sync::Arc;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rand::Rng;
use thiserror::Error;

#[derive(Debug, Clone, Error, PartialEq, Eq)]
pub enum ScalarError {
    #[error("scalars from different domains: {0} and {1}")]
    DomainMismatch(String, String),
    #[error("division by zero")]
    DivisionByZero,
    #[error("{0} is not an odd prime")]
    InvalidPrime(u64),
    #[error("quadratic parameter must be nonzero")]
    ZeroParameter,
    #[error("quadratic extensions are only supported over the rationals or a prime field")]
    NestedQuadratic,
    #[error("operation requires a quadratic domain, got {0}")]
    NotQuadratic(String),
    #[error("no embedding of {0} into {1}")]
    NoEmbedding(String, String),
    #[error("{value} cannot be reduced modulo {p}: denominator divisible by {p}; choose another prime")]
    NotReducible { value: String, p: u64 },
    #[error("square test is not supported over {0}")]
    Unsupported(String),
    #[error("cannot parse {what} from {input:?}")]
    Parse { what: &'static str, input: String },
}

pub type Result<T> = std::result::Result<T, ScalarError>;

/// A field (or, for square `d`, a split quadratic ring) in the supported tower.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum ScalarDomain {
    Rational,
    Prime(u64),
    Quadratic(Arc<QuadraticDomain>),
}

/// `base[w] / (w^2 - d)`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct QuadraticDomain {
    base: ScalarDomain,
    d: Scalar,
}

impl QuadraticDomain {
    pub fn base(&self) -> &ScalarDomain {
        &self.base
    }

    pub fn d(&self) -> &Scalar {
        &self.d
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Scalar {
    domain: ScalarDomain,
    value: Value,
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
enum Value {
    Rational(BigRational),
    Residue(u64),
    /// `a + b*w`
    Pair(Box<[Scalar; 2]>),
}

fn is_odd_prime(p: u64) -> bool {
    if p < 3 || p.is_multiple_of(2) {
        return false;
    }
    let mut i = 3u64;
    while i.saturating_mul(i) <= p {
        if p.is_multiple_of(i) {
            return false;
        }
        i += 2;
    }
    true
}

fn mul_mod(a: u64, b: u64, p: u64) -> u64 {
    ((a as u128 * b as u128) % p as u128) as u64
}

fn pow_mod(mut base: u64, mut exp: u64, p: u64) -> u64 {
    let mut acc = 1 % p;
    base %= p;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mul_mod(acc, base, p);
        }
        base = mul_mod(base, base, p);
        exp >>= 1;
    }
    acc
}

fn bigint_mod(x: &BigInt, p: u64) -> u64 {
    x.mod_floor(&BigInt::from(p)).to_u64().expect("residue fits in u64")
}

impl ScalarDomain {
    pub fn rational() -> Self {
        ScalarDomain::Rational
    }

    /// The prime field of order `p`; `p` must be an odd prime.
    pub fn prime(p: u64) -> Result<Self> {
        if is_odd_prime(p) && p < (1 << 32) {
            Ok(ScalarDomain::Prime(p))
        } else {
            Err(ScalarError::InvalidPrime(p))
        }
    }

    /// `base(w)` with `w^2 = d`. The result is a field only when `d` is a nonsquare.
    pub fn quadratic(base: &ScalarDomain, d: Scalar) -> Result<Self> {
        if matches!(base, ScalarDomain::Quadratic(_)) {
            return Err(ScalarError::NestedQuadratic);
        }
        let d = base.embed(&d)?;
        if d.is_zero() {
            return Err(ScalarError::ZeroParameter);
        }
        Ok(ScalarDomain::Quadratic(Arc::new(QuadraticDomain {
            base: base.clone(),
            d,
        })))
    }

    pub fn as_quadratic(&self) -> Option<&QuadraticDomain> {
        match self {
            ScalarDomain::Quadratic(q) => Some(q),
            _ => None,
        }
    }

    /// The ground domain: itself for Rational/Prime, the base for Quadratic.
    pub fn ground(&self) -> &ScalarDomain {
        match self {
            ScalarDomain::Quadratic(q) => &q.base,
            other => other,
        }
    }

    /// 0 for the rationals.
    pub fn characteristic(&self) -> u64 {
        match self {
            ScalarDomain::Rational => 0,
            ScalarDomain::Prime(p) => *p,
            ScalarDomain::Quadratic(q) => q.base.characteristic(),
        }
    }

    /// Number of elements, for finite domains.
    pub fn order(&self) -> Option<u64> {
        match self {
            ScalarDomain::Rational => None,
            ScalarDomain::Prime(p) => Some(*p),
            ScalarDomain::Quadratic(q) => q.base.order().map(|p| p * p),
        }
    }

    pub fn zero(&self) -> Scalar {
        self.from_i64(0)
    }

    pub fn one(&self) -> Scalar {
        self.from_i64(1)
    }

    pub fn from_i64(&self, n: i64) -> Scalar {
        let value = match self {
            ScalarDomain::Rational => Value::Rational(BigRational::from_integer(n.into())),
            ScalarDomain::Prime(p) => Value::Residue(n.rem_euclid(*p as i64) as u64),
            ScalarDomain::Quadratic(q) => {
                Value::Pair(Box::new([q.base.from_i64(n), q.base.zero()]))
            }
        };
        Scalar {
            domain: self.clone(),
            value,
        }
    }

    /// `num / den`, failing when `den` vanishes in this domain.
    pub fn ratio(&self, num: i64, den: i64) -> Result<Scalar> {
        self.from_i64(num).try_div(&self.from_i64(den))
    }

    /// The generator `w` of a quadratic domain.
    pub fn alpha(&self) -> Result<Scalar> {
        match self {
            ScalarDomain::Quadratic(q) => Ok(Scalar {
                domain: self.clone(),
                value: Value::Pair(Box::new([q.base.zero(), q.base.one()])),
            }),
            other => Err(ScalarError::NotQuadratic(other.to_string())),
        }
    }

    /// `a + b*w` from base coordinates.
    pub fn pair(&self, a: Scalar, b: Scalar) -> Result<Scalar> {
        match self {
            ScalarDomain::Quadratic(q) => {
                check_same(&q.base, &a)?;
                check_same(&q.base, &b)?;
                Ok(Scalar {
                    domain: self.clone(),
                    value: Value::Pair(Box::new([a, b])),
                })
            }
            other => Err(ScalarError::NotQuadratic(other.to_string())),
        }
    }

    /// Whether elements of `sub` can be read as elements of `self`.
    pub fn extends(&self, sub: &ScalarDomain) -> bool {
        self == sub || matches!(self, ScalarDomain::Quadratic(q) if &q.base == sub)
    }

    /// Canonical embedding of `x` into this domain.
    pub fn embed(&self, x: &Scalar) -> Result<Scalar> {
        if &x.domain == self {
            return Ok(x.clone());
        }
        match self {
            ScalarDomain::Quadratic(q) if q.base == x.domain => Ok(Scalar {
                domain: self.clone(),
                value: Value::Pair(Box::new([x.clone(), q.base.zero()])),
            }),
            _ => Err(ScalarError::NoEmbedding(
                x.domain.to_string(),
                self.to_string(),
            )),
        }
    }

    /// Reduction of a rational into this prime field.
    pub fn reduce(&self, x: &Scalar) -> Result<Scalar> {
        match (self, &x.value) {
            (ScalarDomain::Prime(p), Value::Rational(r)) => {
                let den = bigint_mod(r.denom(), *p);
                if den == 0 {
                    return Err(ScalarError::NotReducible {
                        value: x.to_string(),
                        p: *p,
                    });
                }
                let num = bigint_mod(r.numer(), *p);
                let inv = pow_mod(den, p - 2, *p);
                Ok(Scalar {
                    domain: self.clone(),
                    value: Value::Residue(mul_mod(num, inv, *p)),
                })
            }
            _ if &x.domain == self => Ok(x.clone()),
            _ => Err(ScalarError::NoEmbedding(
                x.domain.to_string(),
                self.to_string(),
            )),
        }
    }

    /// All elements, for finite domains, in a fixed order starting with 0.
    pub fn elements(&self) -> Option<Vec<Scalar>> {
        match self {
            ScalarDomain::Rational => None,
            ScalarDomain::Prime(p) => Some((0..*p).map(|v| self.from_i64(v as i64)).collect()),
            ScalarDomain::Quadratic(q) => {
                let base = q.base.elements()?;
                let mut out = Vec::with_capacity(base.len() * base.len());
                for b in &base {
                    for a in &base {
                        out.push(self.pair(a.clone(), b.clone()).expect("base elements"));
                    }
                }
                Some(out)
            }
        }
    }

    /// A random element; rationals are drawn with small numerators and denominators.
    pub fn random<R: Rng + ?Sized>(&self, rng: &mut R) -> Scalar {
        match self {
            ScalarDomain::Rational => {
                let num: i64 = rng.gen_range(-6..=6);
                let den: i64 = rng.gen_range(1..=4);
                self.ratio(num, den).expect("nonzero denominator")
            }
            ScalarDomain::Prime(p) => self.from_i64(rng.gen_range(0..*p) as i64),
            ScalarDomain::Quadratic(q) => {
                let a = q.base.random(rng);
                let b = q.base.random(rng);
                self.pair(a, b).expect("base elements")
            }
        }
    }

    /// Parses a scalar in the textual interchange format: `"3/4"`, `"2"`,
    /// `"1/2+3*w"`, `"-w"`.
    pub fn parse_scalar(&self, text: &str) -> Result<Scalar> {
        let s: String = text.chars().filter(|c| !c.is_whitespace()).collect();
        let err = || ScalarError::Parse {
            what: "scalar",
            input: text.to_string(),
        };
        match self {
            ScalarDomain::Rational => {
                let r = BigRational::from_str(&s).map_err(|_| err())?;
                Ok(Scalar {
                    domain: self.clone(),
                    value: Value::Rational(r),
                })
            }
            ScalarDomain::Prime(_) => {
                let (num, den) = match s.split_once('/') {
                    Some((n, d)) => (n, d),
                    None => (s.as_str(), "1"),
                };
                let num = BigInt::from_str(num).map_err(|_| err())?;
                let den = BigInt::from_str(den).map_err(|_| err())?;
                let p = self.characteristic();
                let n = self.from_i64(bigint_mod(&num, p) as i64);
                let d = self.from_i64(bigint_mod(&den, p) as i64);
                n.try_div(&d)
            }
            ScalarDomain::Quadratic(q) => {
                if !s.contains('w') {
                    return self.embed(&q.base.parse_scalar(&s)?);
                }
                let split = s
                    .char_indices()
                    .skip(1)
                    .find(|&(_, c)| c == '+' || c == '-')
                    .map(|(i, _)| i);
                let (a_text, w_text) = match split {
                    Some(i) if !s[..i].contains('w') => (&s[..i], &s[i..]),
                    _ => ("0", s.as_str()),
                };
                let coeff = w_text
                    .strip_suffix('w')
                    .ok_or_else(err)?
                    .trim_end_matches('*');
                let coeff = match coeff {
                    "" | "+" => "1",
                    "-" => "-1",
                    c => c.strip_prefix('+').unwrap_or(c),
                };
                let a = q.base.parse_scalar(a_text)?;
                let b = q.base.parse_scalar(coeff)?;
                self.pair(a, b)
            }
        }
    }

    /// Field descriptor: `rational`, `fp:<p>`, or `quad:<base>:<d>`.
    pub fn descriptor(&self) -> String {
        self.to_string()
    }
}

impl fmt::Display for ScalarDomain {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ScalarDomain::Rational => write!(f, "rational"),
            ScalarDomain::Prime(p) => write!(f, "fp:{p}"),
            ScalarDomain::Quadratic(q) => write!(f, "quad:{}:{}", q.base, q.d),
        }
    }
}

impl FromStr for ScalarDomain {
    type Err = ScalarError;

    fn from_str(s: &str) -> Result<Self> {
        let err = || ScalarError::Parse {
            what: "field descriptor",
            input: s.to_string(),
        };
        let s = s.trim();
        if s == "rational" || s == "Q" {
            return Ok(ScalarDomain::Rational);
        }
        if let Some(p) = s.strip_prefix("fp:") {
            let p: u64 = p.parse().map_err(|_| err())?;
            return ScalarDomain::prime(p);
        }
        if let Some(rest) = s.strip_prefix("quad:") {
            let (base, d) = rest.rsplit_once(':').ok_or_else(err)?;
            let base: ScalarDomain = base.parse()?;
            let d = base.parse_scalar(d)?;
            return ScalarDomain::quadratic(&base, d);
        }
        Err(err())
    }
}

fn check_same(domain: &ScalarDomain, x: &Scalar) -> Result<()> {
    if &x.domain == domain {
        Ok(())
    } else {
        Err(ScalarError::DomainMismatch(
            domain.to_string(),
            x.domain.to_string(),
        ))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ArithOp {
    Add,
    Sub,
    Mul,
    Div,
}

/// Checked binary arithmetic.
pub fn arith(x: &Scalar, y: &Scalar, op: ArithOp) -> Result<Scalar> {
    check_same(&x.domain, y)?;
    Ok(match op {
        ArithOp::Add => x.add_unchecked(y),
        ArithOp::Sub => x.sub_unchecked(y),
        ArithOp::Mul => x.mul_unchecked(y),
        ArithOp::Div => x.mul_unchecked(&y.inv()?),
    })
}

impl Scalar {
    pub fn domain(&self) -> &ScalarDomain {
        &self.domain
    }

    pub fn is_zero(&self) -> bool {
        match &self.value {
            Value::Rational(r) => r.is_zero(),
            Value::Residue(v) => *v == 0,
            Value::Pair(ab) => ab[0].is_zero() && ab[1].is_zero(),
        }
    }

    pub fn is_one(&self) -> bool {
        match &self.value {
            Value::Rational(r) => r.is_one(),
            Value::Residue(v) => *v == 1,
            Value::Pair(ab) => ab[0].is_one() && ab[1].is_zero(),
        }
    }

    pub fn as_rational(&self) -> Option<&BigRational> {
        match &self.value {
            Value::Rational(r) => Some(r),
            _ => None,
        }
    }

    pub fn residue(&self) -> Option<u64> {
        match &self.value {
            Value::Residue(v) => Some(*v),
            _ => None,
        }
    }

    /// Base coordinates `(a, b)` of `a + b*w`.
    pub fn components(&self) -> Option<(&Scalar, &Scalar)> {
        match &self.value {
            Value::Pair(ab) => Some((&ab[0], &ab[1])),
            _ => None,
        }
    }

    fn quad_d(&self) -> &Scalar {
        match &self.domain {
            ScalarDomain::Quadratic(q) => &q.d,
            _ => unreachable!("pair value outside a quadratic domain"),
        }
    }

    fn with_value(&self, value: Value) -> Scalar {
        Scalar {
            domain: self.domain.clone(),
            value,
        }
    }

    fn add_unchecked(&self, y: &Scalar) -> Scalar {
        let value = match (&self.value, &y.value) {
            (Value::Rational(a), Value::Rational(b)) => Value::Rational(a + b),
            (Value::Residue(a), Value::Residue(b)) => {
                let p = self.domain.characteristic();
                Value::Residue((a + b) % p)
            }
            (Value::Pair(a), Value::Pair(b)) => Value::Pair(Box::new([
                a[0].add_unchecked(&b[0]),
                a[1].add_unchecked(&b[1]),
            ])),
            _ => unreachable!("domains already checked"),
        };
        self.with_value(value)
    }

    fn sub_unchecked(&self, y: &Scalar) -> Scalar {
        self.add_unchecked(&y.neg_ref())
    }

    fn mul_unchecked(&self, y: &Scalar) -> Scalar {
        let value = match (&self.value, &y.value) {
            (Value::Rational(a), Value::Rational(b)) => Value::Rational(a * b),
            (Value::Residue(a), Value::Residue(b)) => {
                Value::Residue(mul_mod(*a, *b, self.domain.characteristic()))
            }
            (Value::Pair(a), Value::Pair(b)) => {
                let d = self.quad_d();
                let re = a[0]
                    .mul_unchecked(&b[0])
                    .add_unchecked(&d.mul_unchecked(&a[1].mul_unchecked(&b[1])));
                let im = a[0]
                    .mul_unchecked(&b[1])
                    .add_unchecked(&a[1].mul_unchecked(&b[0]));
                Value::Pair(Box::new([re, im]))
            }
            _ => unreachable!("domains already checked"),
        };
        self.with_value(value)
    }

    fn neg_ref(&self) -> Scalar {
        let value = match &self.value {
            Value::Rational(a) => Value::Rational(-a),
            Value::Residue(a) => {
                let p = self.domain.characteristic();
                Value::Residue((p - a) % p)
            }
            Value::Pair(a) => Value::Pair(Box::new([a[0].neg_ref(), a[1].neg_ref()])),
        };
        self.with_value(value)
    }

    pub fn try_add(&self, y: &Scalar) -> Result<Scalar> {
        arith(self, y, ArithOp::Add)
    }

    pub fn try_sub(&self, y: &Scalar) -> Result<Scalar> {
        arith(self, y, ArithOp::Sub)
    }

    pub fn try_mul(&self, y: &Scalar) -> Result<Scalar> {
        arith(self, y, ArithOp::Mul)
    }

    pub fn try_div(&self, y: &Scalar) -> Result<Scalar> {
        arith(self, y, ArithOp::Div)
    }

    /// `a^2 - d b^2` for a quadratic element, `x` itself otherwise.
    pub fn norm(&self) -> Scalar {
        match &self.value {
            Value::Pair(ab) => {
                let d = self.quad_d();
                ab[0].mul_unchecked(&ab[0]).sub_unchecked(
                    &d.mul_unchecked(&ab[1].mul_unchecked(&ab[1])),
                )
            }
            _ => self.clone(),
        }
    }

    pub fn inv(&self) -> Result<Scalar> {
        if self.is_zero() {
            return Err(ScalarError::DivisionByZero);
        }
        let value = match &self.value {
            Value::Rational(a) => Value::Rational(a.recip()),
            Value::Residue(a) => {
                let p = self.domain.characteristic();
                Value::Residue(pow_mod(*a, p - 2, p))
            }
            Value::Pair(ab) => {
                // zero norm only happens for zero divisors of a split ring
                let n_inv = self.norm().inv()?;
                Value::Pair(Box::new([
                    ab[0].mul_unchecked(&n_inv),
                    ab[1].neg_ref().mul_unchecked(&n_inv),
                ]))
            }
        };
        Ok(self.with_value(value))
    }

    pub fn pow(&self, mut exp: u64) -> Scalar {
        let mut acc = self.domain.one();
        let mut base = self.clone();
        while exp > 0 {
            if exp & 1 == 1 {
                acc = acc.mul_unchecked(&base);
            }
            base = base.mul_unchecked(&base);
            exp >>= 1;
        }
        acc
    }

    /// Galois conjugation `a + b*w -> a - b*w`.
    pub fn conjugate(&self) -> Result<Scalar> {
        match &self.value {
            Value::Pair(ab) => Ok(self.with_value(Value::Pair(Box::new([
                ab[0].clone(),
                ab[1].neg_ref(),
            ])))),
            _ => Err(ScalarError::NotQuadratic(self.domain.to_string())),
        }
    }
}

/// Whether `d` is a square in `domain`.
///
/// Rationals: perfect-square numerator and denominator. Prime fields: Euler's
/// criterion. Quadratic domains over a prime field with nonsquare parameter
/// (finite fields of order `p^2`): Euler's criterion with `q = p^2`.
pub fn is_square(domain: &ScalarDomain, d: &Scalar) -> Result<bool> {
    let d = domain.embed(d)?;
    if d.is_zero() {
        return Err(ScalarError::ZeroParameter);
    }
    match &d.value {
        Value::Rational(r) => Ok(!r.is_negative()
            && is_perfect_square(r.numer())
            && is_perfect_square(r.denom())),
        Value::Residue(v) => {
            let p = domain.characteristic();
            Ok(pow_mod(*v, (p - 1) / 2, p) == 1)
        }
        Value::Pair(_) => {
            let q = domain.as_quadratic().expect("pair value");
            match q.base {
                ScalarDomain::Prime(p) if !is_square(&q.base, &q.d)? => {
                    Ok(d.pow((p * p - 1) / 2).is_one())
                }
                _ => Err(ScalarError::Unsupported(domain.to_string())),
            }
        }
    }
}

fn is_perfect_square(n: &BigInt) -> bool {
    !n.is_negative() && {
        let r = n.sqrt();
        &(&r * &r) == n
    }
}

/// A square root of `d` in `domain` (rationals and prime fields), if one exists.
pub fn sqrt(domain: &ScalarDomain, d: &Scalar) -> Result<Option<Scalar>> {
    let d = domain.embed(d)?;
    if d.is_zero() {
        return Ok(Some(d));
    }
    match &d.value {
        Value::Rational(r) => {
            if !is_square(domain, &d)? {
                return Ok(None);
            }
            let root = BigRational::new(r.numer().sqrt(), r.denom().sqrt());
            Ok(Some(d.with_value(Value::Rational(root))))
        }
        Value::Residue(v) => {
            let p = domain.characteristic();
            if pow_mod(*v, (p - 1) / 2, p) != 1 {
                return Ok(None);
            }
            Ok(Some(d.with_value(Value::Residue(tonelli_shanks(*v, p)))))
        }
        Value::Pair(_) => Err(ScalarError::Unsupported(domain.to_string())),
    }
}

fn tonelli_shanks(n: u64, p: u64) -> u64 {
    if p % 4 == 3 {
        return pow_mod(n, (p + 1) / 4, p);
    }
    let mut q = p - 1;
    let mut s = 0u32;
    while q.is_multiple_of(2) {
        q /= 2;
        s += 1;
    }
    let z = (2..p)
        .find(|&z| pow_mod(z, (p - 1) / 2, p) == p - 1)
        .expect("a nonresidue exists");
    let mut m = s;
    let mut c = pow_mod(z, q, p);
    let mut t = pow_mod(n, q, p);
    let mut r = pow_mod(n, q.div_ceil(2), p);
    while t != 1 {
        let mut i = 0;
        let mut t2 = t;
        while t2 != 1 {
            t2 = mul_mod(t2, t2, p);
            i += 1;
        }
        let b = pow_mod(c, 1 << (m - i - 1), p);
        m = i;
        c = mul_mod(b, b, p);
        t = mul_mod(t, c, p);
        r = mul_mod(r, b, p);
    }
    r
}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.value {
            Value::Rational(r) => {
                if r.is_integer() {
                    write!(f, "{}", r.numer())
                } else {
                    write!(f, "{}/{}", r.numer(), r.denom())
                }
            }
            Value::Residue(v) => write!(f, "{v}"),
            Value::Pair(ab) => {
                let (a, b) = (&ab[0], &ab[1]);
                if b.is_zero() {
                    return write!(f, "{a}");
                }
                let b_text = b.to_string();
                let w_term = match b_text.as_str() {
                    "1" => "w".to_string(),
                    "-1" => "-w".to_string(),
                    t => format!("{t}*w"),
                };
                if a.is_zero() {
                    write!(f, "{w_term}")
                } else if w_term.starts_with('-') {
                    write!(f, "{a}{w_term}")
                } else {
                    write!(f, "{a}+{w_term}")
                }
            }
        }
    }
}

macro_rules! forward_binop {
    ($tr:ident, $method:ident, $imp:ident, $assign_tr:ident, $assign:ident) => {
        impl $tr<&Scalar> for &Scalar {
            type Output = Scalar;
            fn $method(self, rhs: &Scalar) -> Scalar {
                assert_eq!(
                    self.domain, rhs.domain,
                    "arithmetic on scalars from different domains"
                );
                self.$imp(rhs)
            }
        }
        impl $tr<Scalar> for Scalar {
            type Output = Scalar;
            fn $method(self, rhs: Scalar) -> Scalar {
                (&self).$method(&rhs)
            }
        }
        impl $tr<&Scalar> for Scalar {
            type Output = Scalar;
            fn $method(self, rhs: &Scalar) -> Scalar {
                (&self).$method(rhs)
            }
        }
        impl $tr<Scalar> for &Scalar {
            type Output = Scalar;
            fn $method(self, rhs: Scalar) -> Scalar {
                self.$method(&rhs)
            }
        }
        impl $assign_tr<&Scalar> for Scalar {
            fn $assign(&mut self, rhs: &Scalar) {
                *self = (&*self).$method(rhs);
            }
        }
        impl $assign_tr<Scalar> for Scalar {
            fn $assign(&mut self, rhs: Scalar) {
                *self = (&*self).$method(&rhs);
            }
        }
    };
}

forward_binop!(Add, add, add_unchecked, AddAssign, add_assign);
forward_binop!(Sub, sub, sub_unchecked, SubAssign, sub_assign);
forward_binop!(Mul, mul, mul_unchecked, MulAssign, mul_assign);

impl Neg for &Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        self.neg_ref()
    }
}

impl Neg for Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        self.neg_ref()
    }
}
