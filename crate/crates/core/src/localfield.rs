//! Exact arithmetic on the dense subrings `Z[1/p]` of `Q_p` (carry mode) and
//! `F_p[t, 1/t]` of `F_p((t))` (modular mode).
//!
//! Both groups are self-dual. In carry mode the pairing is
//! `<x, y> = exp(2 pi i {x y})` with `{.}` the p-adic fractional part; in
//! modular mode it is the residue character `exp(2 pi i c_{-1}(x y) / p)`.
//! The expansive automorphism `A` is multiplication by `1/p` (resp. `1/t`)
//! and is its own adjoint under these pairings.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::{BigInt, BigUint};
use num_complex::Complex64;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{Pow, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Addition law of the group: carrying digits (`Q_p`) or digitwise mod p (`F_p((t))`).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    Carry,
    Modular,
}

impl fmt::Display for Mode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Mode::Carry => f.write_str("carry"),
            Mode::Modular => f.write_str("modular"),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct GroupParams {
    p: u32,
    mode: Mode,
}

impl fmt::Display for GroupParams {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "p={} {}", self.p, self.mode)
    }
}

pub(crate) fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2u64;
    while d * d <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

impl GroupParams {
    pub fn new(p: u32, mode: Mode) -> Result<Self> {
        if !is_prime(p as u64) {
            return Err(Error::NotPrime(p as u64));
        }
        Ok(GroupParams { p, mode })
    }

    pub fn carry(p: u32) -> Result<Self> {
        Self::new(p, Mode::Carry)
    }

    pub fn modular(p: u32) -> Result<Self> {
        Self::new(p, Mode::Modular)
    }

    pub fn p(&self) -> u32 {
        self.p
    }

    pub fn mode(&self) -> Mode {
        self.mode
    }

    pub fn zero(&self) -> GroupElement {
        match self.mode {
            Mode::Carry => GroupElement { params: *self, repr: Repr::Carry { num: BigInt::zero(), vexp: 0 } },
            Mode::Modular => GroupElement { params: *self, repr: Repr::Modular(BTreeMap::new()) },
        }
    }

    pub fn one(&self) -> GroupElement {
        self.from_int(1)
    }

    /// The image of an ordinary integer. In modular mode this is `n mod p`.
    pub fn from_int(&self, n: i64) -> GroupElement {
        match self.mode {
            Mode::Carry => GroupElement::from_ratio(*self, BigInt::from(n), 0),
            Mode::Modular => {
                let d = n.rem_euclid(self.p as i64) as u32;
                GroupElement::from_digits(*self, 0, &[d])
            }
        }
    }

    /// Parses the text form: `num/p^vexp` (or a bare integer) in carry mode,
    /// `[lo]d0d1...` in modular mode.
    pub fn parse(&self, text: &str) -> Result<GroupElement> {
        GroupElement::parse(*self, text)
    }
}

/// p-adic (resp. t-adic) valuation; the zero element has valuation `Infinite`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Valuation {
    Finite(i64),
    Infinite,
}

impl Valuation {
    /// `x` lies in `A^n H` iff `valuation(x) >= -n`; this asks `valuation >= v`.
    pub fn at_least(self, v: i64) -> bool {
        match self {
            Valuation::Infinite => true,
            Valuation::Finite(w) => w >= v,
        }
    }

    pub fn finite(self) -> Option<i64> {
        match self {
            Valuation::Finite(v) => Some(v),
            Valuation::Infinite => None,
        }
    }
}

impl fmt::Display for Valuation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Valuation::Finite(v) => write!(f, "{v}"),
            Valuation::Infinite => f.write_str("inf"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
enum Repr {
    /// value = num * p^(-vexp); canonical when vexp == 0 or p does not divide num.
    Carry { num: BigInt, vexp: u32 },
    /// exponent -> nonzero digit in 1..p.
    Modular(BTreeMap<i64, u32>),
}

/// An exact element of `Z[1/p]` or `F_p[t, 1/t]`.
///
/// Storage is canonical, so derived equality and ordering are structural.
/// The ordering is only meant for deterministic bucketing, not arithmetic.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct GroupElement {
    params: GroupParams,
    repr: Repr,
}

fn pow_p(p: u32, e: u32) -> BigInt {
    Pow::pow(BigInt::from(p), e)
}

impl GroupElement {
    /// `num * p^(-vexp)` in carry mode; `vexp` may be negative.
    ///
    /// Panics if `params` is modular.
    pub fn from_ratio(params: GroupParams, num: BigInt, vexp: i64) -> Self {
        assert_eq!(params.mode, Mode::Carry, "from_ratio needs carry mode");
        let (mut num, mut vexp) =
            if vexp < 0 { (num * pow_p(params.p, (-vexp) as u32), 0u32) } else { (num, vexp as u32) };
        if num.is_zero() {
            vexp = 0;
        } else {
            let p = BigInt::from(params.p);
            while vexp > 0 {
                let (q, r) = num.div_rem(&p);
                if !r.is_zero() {
                    break;
                }
                num = q;
                vexp -= 1;
            }
        }
        GroupElement { params, repr: Repr::Carry { num, vexp } }
    }

    /// `sum_j digits[j] * p^(lo + j)` (carry) or `sum_j digits[j] * t^(lo + j)` (modular).
    /// Digits are reduced mod p.
    pub fn from_digits(params: GroupParams, lo: i64, digits: &[u32]) -> Self {
        match params.mode {
            Mode::Carry => {
                let p = BigInt::from(params.p);
                let mut num = BigInt::zero();
                for &d in digits.iter().rev() {
                    num = num * &p + BigInt::from(d % params.p);
                }
                Self::from_ratio(params, num, -lo)
            }
            Mode::Modular => {
                let coeffs = digits
                    .iter()
                    .enumerate()
                    .filter_map(|(j, &d)| {
                        let d = d % params.p;
                        (d != 0).then_some((lo + j as i64, d))
                    })
                    .collect();
                GroupElement { params, repr: Repr::Modular(coeffs) }
            }
        }
    }

    pub fn params(&self) -> GroupParams {
        self.params
    }

    pub fn is_zero(&self) -> bool {
        match &self.repr {
            Repr::Carry { num, .. } => num.is_zero(),
            Repr::Modular(c) => c.is_empty(),
        }
    }

    /// Carry-mode `(num, vexp)` with value `num / p^vexp`.
    pub fn as_ratio(&self) -> Option<(&BigInt, u32)> {
        match &self.repr {
            Repr::Carry { num, vexp } => Some((num, *vexp)),
            Repr::Modular(_) => None,
        }
    }

    /// Modular-mode coefficient map (exponent -> nonzero digit).
    pub fn laurent_coeffs(&self) -> Option<&BTreeMap<i64, u32>> {
        match &self.repr {
            Repr::Modular(c) => Some(c),
            Repr::Carry { .. } => None,
        }
    }

    fn check(&self, other: &Self) -> Result<()> {
        if self.params != other.params {
            return Err(Error::ParamMismatch(self.params, other.params));
        }
        Ok(())
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.check(other)?;
        Ok(match (&self.repr, &other.repr) {
            (Repr::Carry { num: a, vexp: va }, Repr::Carry { num: b, vexp: vb }) => {
                let v = (*va).max(*vb);
                let num = a * pow_p(self.params.p, v - va) + b * pow_p(self.params.p, v - vb);
                Self::from_ratio(self.params, num, v as i64)
            }
            (Repr::Modular(a), Repr::Modular(b)) => {
                let p = self.params.p;
                let mut out = a.clone();
                for (&e, &d) in b {
                    let s = (out.get(&e).copied().unwrap_or(0) + d) % p;
                    if s == 0 {
                        out.remove(&e);
                    } else {
                        out.insert(e, s);
                    }
                }
                GroupElement { params: self.params, repr: Repr::Modular(out) }
            }
            _ => unreachable!("params agree"),
        })
    }

    pub fn negate(&self) -> Self {
        match &self.repr {
            Repr::Carry { num, vexp } => {
                GroupElement { params: self.params, repr: Repr::Carry { num: -num, vexp: *vexp } }
            }
            Repr::Modular(c) => {
                let p = self.params.p;
                GroupElement { params: self.params, repr: Repr::Modular(c.iter().map(|(&e, &d)| (e, p - d)).collect()) }
            }
        }
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.check(other)?;
        self.add(&other.negate())
    }

    pub fn mul(&self, other: &Self) -> Result<Self> {
        self.check(other)?;
        Ok(match (&self.repr, &other.repr) {
            (Repr::Carry { num: a, vexp: va }, Repr::Carry { num: b, vexp: vb }) => {
                Self::from_ratio(self.params, a * b, (*va + *vb) as i64)
            }
            (Repr::Modular(a), Repr::Modular(b)) => {
                let p = self.params.p as u64;
                let mut acc: BTreeMap<i64, u64> = BTreeMap::new();
                for (&i, &x) in a {
                    for (&j, &y) in b {
                        *acc.entry(i + j).or_insert(0) += x as u64 * y as u64 % p;
                    }
                }
                let coeffs = acc
                    .into_iter()
                    .filter_map(|(e, s)| {
                        let s = (s % p) as u32;
                        (s != 0).then_some((e, s))
                    })
                    .collect();
                GroupElement { params: self.params, repr: Repr::Modular(coeffs) }
            }
            _ => unreachable!("params agree"),
        })
    }

    pub fn valuation(&self) -> Valuation {
        match &self.repr {
            Repr::Carry { num, vexp } => {
                if num.is_zero() {
                    Valuation::Infinite
                } else if *vexp > 0 {
                    Valuation::Finite(-(*vexp as i64))
                } else {
                    let p = BigInt::from(self.params.p);
                    let mut n = num.clone();
                    let mut v = 0;
                    loop {
                        let (q, r) = n.div_rem(&p);
                        if !r.is_zero() {
                            break;
                        }
                        n = q;
                        v += 1;
                    }
                    Valuation::Finite(v)
                }
            }
            Repr::Modular(c) => match c.keys().next() {
                Some(&e) => Valuation::Finite(e),
                None => Valuation::Infinite,
            },
        }
    }

    /// `A^n x`, i.e. `p^(-n) x` (carry) or `t^(-n) x` (modular).
    pub fn apply_automorphism(&self, n: i64) -> Self {
        match &self.repr {
            Repr::Carry { num, vexp } => Self::from_ratio(self.params, num.clone(), *vexp as i64 + n),
            Repr::Modular(c) => {
                GroupElement { params: self.params, repr: Repr::Modular(c.iter().map(|(&e, &d)| (e - n, d)).collect()) }
            }
        }
    }

    /// The p-adic digit at exponent `e` (digits in `0..p`). Negative carry
    /// elements use their infinite p-adic expansion.
    pub fn digit(&self, e: i64) -> u32 {
        match &self.repr {
            Repr::Carry { num, vexp } => {
                let j = e + *vexp as i64;
                if j < 0 {
                    return 0;
                }
                let shifted = num.div_floor(&pow_p(self.params.p, j as u32));
                shifted.mod_floor(&BigInt::from(self.params.p)).to_u32().expect("digit < p")
            }
            Repr::Modular(c) => c.get(&e).copied().unwrap_or(0),
        }
    }

    /// Digits at exponents `lo..hi`, lowest exponent first.
    pub fn digits(&self, lo: i64, hi: i64) -> Vec<u32> {
        (lo..hi).map(|e| self.digit(e)).collect()
    }

    /// The part of `x` at exponents `< 0`: `{x}` in carry mode, the polar part in
    /// modular mode. `x - fractional_part(x)` lies in `H`.
    pub fn fractional_part(&self) -> Self {
        match &self.repr {
            Repr::Carry { num, vexp } => {
                if *vexp == 0 {
                    return self.params.zero();
                }
                let num = num.mod_floor(&pow_p(self.params.p, *vexp));
                Self::from_ratio(self.params, num, *vexp as i64)
            }
            Repr::Modular(c) => {
                GroupElement { params: self.params, repr: Repr::Modular(c.range(..0).map(|(&e, &d)| (e, d)).collect()) }
            }
        }
    }

    /// Character value `<self, xi>` as an exact phase.
    pub fn pairing_phase(&self, xi: &Self) -> Result<Phase> {
        self.check(xi)?;
        let p = self.params.p;
        Ok(match (&self.repr, &xi.repr) {
            (Repr::Carry { .. }, Repr::Carry { .. }) => {
                let prod = self.mul(xi)?.fractional_part();
                let (num, vexp) = prod.as_ratio().expect("carry");
                Phase::new(p, num.to_biguint().expect("fractional part is nonnegative"), vexp)
            }
            (Repr::Modular(a), Repr::Modular(b)) => {
                let mut c = 0u64;
                for (&i, &x) in a {
                    if let Some(&y) = b.get(&(-1 - i)) {
                        c += x as u64 * y as u64;
                    }
                }
                Phase::new(p, BigUint::from(c % p as u64), 1)
            }
            _ => unreachable!("params agree"),
        })
    }

    fn parse(params: GroupParams, text: &str) -> Result<Self> {
        let fail = |reason: &str| Error::Parse { text: text.to_string(), reason: reason.to_string() };
        let s = text.trim();
        match params.mode {
            Mode::Carry => {
                let (num_s, den_s) = match s.split_once('/') {
                    Some((a, b)) => (a.trim(), Some(b.trim())),
                    None => (s, None),
                };
                let num: BigInt = num_s.parse().map_err(|_| fail("bad numerator"))?;
                let vexp = match den_s {
                    None => 0,
                    Some(d) => {
                        let (base, exp) = d.split_once('^').ok_or_else(|| fail("denominator must be p^e"))?;
                        let base: u32 = base.trim().parse().map_err(|_| fail("bad denominator base"))?;
                        if base != params.p {
                            return Err(fail("denominator base differs from p"));
                        }
                        exp.trim().parse::<i64>().map_err(|_| fail("bad denominator exponent"))?
                    }
                };
                Ok(Self::from_ratio(params, num, vexp))
            }
            Mode::Modular => {
                let rest = s.strip_prefix('[').ok_or_else(|| fail("expected `[lo]digits`"))?;
                let (lo, digits) = rest.split_once(']').ok_or_else(|| fail("missing `]`"))?;
                let lo: i64 = lo.trim().parse().map_err(|_| fail("bad lowest exponent"))?;
                let mut ds = Vec::with_capacity(digits.len());
                for ch in digits.chars() {
                    let d = ch.to_digit(36).ok_or_else(|| fail("bad digit"))?;
                    if d >= params.p {
                        return Err(fail("digit not below p"));
                    }
                    ds.push(d);
                }
                Ok(Self::from_digits(params, lo, &ds))
            }
        }
    }
}

impl fmt::Display for GroupElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.repr {
            Repr::Carry { num, vexp } => write!(f, "{}/{}^{}", num, self.params.p, vexp),
            Repr::Modular(c) => {
                let (Some((&lo, _)), Some((&hi, _))) = (c.first_key_value(), c.last_key_value()) else {
                    return f.write_str("[0]");
                };
                write!(f, "[{lo}]")?;
                for e in lo..=hi {
                    let d = c.get(&e).copied().unwrap_or(0);
                    write!(f, "{}", char::from_digit(d, 36).expect("p <= 36 for text form"))?;
                }
                Ok(())
            }
        }
    }
}

impl fmt::Debug for GroupElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

/// A character value `exp(2 pi i num / p^denom_exp)` kept as an exact rational in `[0, 1)`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Phase {
    p: u32,
    num: BigUint,
    denom_exp: u32,
}

impl Phase {
    /// Reduces `num / p^denom_exp` mod 1 and canonicalizes.
    pub fn new(p: u32, num: BigUint, denom_exp: u32) -> Self {
        let pb = BigUint::from(p);
        let mut num = num % Pow::pow(&pb, denom_exp);
        let mut denom_exp = denom_exp;
        if num.is_zero() {
            denom_exp = 0;
        } else {
            while denom_exp > 0 && (&num % &pb).is_zero() {
                num /= &pb;
                denom_exp -= 1;
            }
        }
        Phase { p, num, denom_exp }
    }

    pub fn zero(p: u32) -> Self {
        Phase { p, num: BigUint::zero(), denom_exp: 0 }
    }

    pub fn num(&self) -> &BigUint {
        &self.num
    }

    pub fn denom_exp(&self) -> u32 {
        self.denom_exp
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn to_rational(&self) -> BigRational {
        BigRational::new(BigInt::from(self.num.clone()), BigInt::from(Pow::pow(BigUint::from(self.p), self.denom_exp)))
    }

    /// Sum mod 1.
    pub fn add(&self, other: &Self) -> Self {
        assert_eq!(self.p, other.p, "phases over different primes");
        let d = self.denom_exp.max(other.denom_exp);
        let pb = BigUint::from(self.p);
        let a = &self.num * Pow::pow(&pb, d - self.denom_exp);
        let b = &other.num * Pow::pow(&pb, d - other.denom_exp);
        Phase::new(self.p, a + b, d)
    }

    pub fn negate(&self) -> Self {
        if self.is_zero() {
            return self.clone();
        }
        let den = Pow::pow(BigUint::from(self.p), self.denom_exp);
        Phase::new(self.p, den - &self.num, self.denom_exp)
    }

    /// `n * phase` mod 1.
    pub fn scale(&self, n: &BigUint) -> Self {
        Phase::new(self.p, &self.num * n, self.denom_exp)
    }

    pub fn complex_value(&self) -> Complex64 {
        let den = Pow::pow(BigUint::from(self.p), self.denom_exp);
        match (self.num.to_u64(), den.to_u64()) {
            (Some(n), Some(d)) => unit_root(n, d),
            _ => {
                let turns = self.to_rational().to_f64().unwrap_or(0.0);
                let turns = if turns > 0.5 { turns - 1.0 } else { turns };
                Complex64::from_polar(1.0, std::f64::consts::TAU * turns)
            }
        }
    }
}

impl fmt::Display for Phase {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}^{}", self.num, self.p, self.denom_exp)
    }
}

/// `exp(2 pi i num / den)` with exact values at quarter turns and the angle
/// reduced to `(-1/8, 1/8]` turns before calling `sin_cos`.
pub(crate) fn unit_root(num: u64, den: u64) -> Complex64 {
    let num = (num % den) as u128;
    let den = den as u128;
    // quadrant q and the remainder r/(4 den) in [-1/8, 1/8] turns
    let scaled = 4 * num;
    let mut q = scaled / den;
    let mut r = (scaled % den) as i128;
    if 2 * r > den as i128 {
        q += 1;
        r -= den as i128;
    }
    let base = if r == 0 {
        Complex64::new(1.0, 0.0)
    } else {
        let angle = std::f64::consts::FRAC_PI_2 * (r as f64 / den as f64);
        let (s, c) = angle.sin_cos();
        Complex64::new(c, s)
    };
    match q % 4 {
        0 => base,
        1 => Complex64::new(-base.im, base.re),
        2 => Complex64::new(-base.re, -base.im),
        _ => Complex64::new(base.im, -base.re),
    }
}
