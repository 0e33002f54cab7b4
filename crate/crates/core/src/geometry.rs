//! Balls `Q_n(x) = x + A^n H`, phase-space balls, and canonical sections of
//! the quotients `A^N H / A^n H`.

use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Pow;

use crate::error::{Error, Result};
use crate::localfield::{GroupElement, GroupParams};

/// Largest quotient a section may enumerate.
pub const MAX_SECTION_LEN: u64 = 1 << 22;

/// Canonical representative of `x + A^n H`: the terms of `x` at exponents `< -n`.
pub fn coset_rep(x: &GroupElement, n: i64) -> GroupElement {
    x.apply_automorphism(-n).fractional_part().apply_automorphism(n)
}

/// `y` lies in `Q_n(x)`.
pub fn same_ball(x: &GroupElement, y: &GroupElement, n: i64) -> Result<bool> {
    Ok(x.sub(y)?.valuation().at_least(-n))
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Ball {
    scale: i64,
    key: GroupElement,
}

impl Ball {
    pub fn scale(&self) -> i64 {
        self.scale
    }

    pub fn key(&self) -> &GroupElement {
        &self.key
    }

    pub fn contains(&self, y: &GroupElement) -> Result<bool> {
        same_ball(&self.key, y, self.scale)
    }

    /// Haar measure `p^n`, with `m(H) = 1`.
    pub fn measure(&self) -> BigRational {
        p_power(self.key.params().p(), self.scale)
    }
}

pub fn ball_of(x: &GroupElement, n: i64) -> Ball {
    Ball { scale: n, key: coset_rep(x, n) }
}

impl fmt::Display for Ball {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Q[{}]@{}", self.scale, self.key)
    }
}

/// `Q_n(x) x Q_n(xi)` in `G x G^`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct PhaseBall {
    scale: i64,
    key_x: GroupElement,
    key_xi: GroupElement,
}

impl PhaseBall {
    pub fn scale(&self) -> i64 {
        self.scale
    }

    pub fn key_x(&self) -> &GroupElement {
        &self.key_x
    }

    pub fn key_xi(&self) -> &GroupElement {
        &self.key_xi
    }

    pub fn contains(&self, x: &GroupElement, xi: &GroupElement) -> Result<bool> {
        Ok(same_ball(&self.key_x, x, self.scale)? && same_ball(&self.key_xi, xi, self.scale)?)
    }

    /// `p^(2n)`.
    pub fn measure(&self) -> BigRational {
        p_power(self.key_x.params().p(), 2 * self.scale)
    }
}

pub fn phase_ball_of(x: &GroupElement, xi: &GroupElement, n: i64) -> PhaseBall {
    PhaseBall { scale: n, key_x: coset_rep(x, n), key_xi: coset_rep(xi, n) }
}

impl fmt::Display for PhaseBall {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Q[{}]@({}, {})", self.scale, self.key_x, self.key_xi)
    }
}

pub(crate) fn p_power(p: u32, e: i64) -> BigRational {
    let pe = Pow::pow(BigInt::from(p), e.unsigned_abs());
    if e >= 0 {
        BigRational::from_integer(pe)
    } else {
        BigRational::new(BigInt::from(1), pe)
    }
}

/// Representatives of `A^N H / A^n H`, one per coset.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Section {
    params: GroupParams,
    outer: i64,
    inner: i64,
    elements: Vec<GroupElement>,
}

/// Base-p digits of `a`, least significant first.
pub(crate) fn base_p_digits(mut a: u64, p: u32, len: usize) -> Vec<u32> {
    let mut out = Vec::with_capacity(len);
    for _ in 0..len {
        out.push((a % p as u64) as u32);
        a /= p as u64;
    }
    out
}

pub(crate) fn checked_p_pow(p: u32, e: u64) -> Option<u64> {
    (p as u64).checked_pow(u32::try_from(e).ok()?)
}

/// Canonical section of `A^N H / A^n H`.
///
/// Element `a` (for `0 <= a < p^(N-n)`) has the base-p digits of `a` at
/// exponents `-N, -N+1, ..., -n-1`, lowest exponent least significant. In carry
/// mode that is exactly `a / p^N`; modular mode uses the same digits with
/// modular addition.
pub fn section(params: GroupParams, outer: i64, inner: i64) -> Result<Section> {
    if outer < inner {
        return Err(Error::arg(format!("section needs N >= n, got N={outer}, n={inner}")));
    }
    let width = (outer - inner) as u64;
    let len = checked_p_pow(params.p(), width)
        .filter(|&l| l <= MAX_SECTION_LEN)
        .ok_or_else(|| Error::arg(format!("section of size {}^{width} is too large", params.p())))?;
    let elements = (0..len)
        .map(|a| GroupElement::from_digits(params, -outer, &base_p_digits(a, params.p(), width as usize)))
        .collect();
    Ok(Section { params, outer, inner, elements })
}

impl Section {
    pub fn params(&self) -> GroupParams {
        self.params
    }

    pub fn outer(&self) -> i64 {
        self.outer
    }

    pub fn inner(&self) -> i64 {
        self.inner
    }

    pub fn elements(&self) -> &[GroupElement] {
        &self.elements
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    /// Position of the representative of `x + A^n H`, if `x` lies in `A^N H`.
    pub fn index_of(&self, x: &GroupElement) -> Option<usize> {
        if x.params() != self.params || !x.valuation().at_least(-self.outer) {
            return None;
        }
        let p = self.params.p() as u64;
        let mut a = 0u64;
        for e in (-self.outer..-self.inner).rev() {
            a = a * p + x.digit(e) as u64;
        }
        Some(a as usize)
    }
}

impl fmt::Display for Section {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("{")?;
        for (i, e) in self.elements.iter().enumerate() {
            if i > 0 {
                f.write_str(", ")?;
            }
            write!(f, "{e}")?;
        }
        f.write_str("}")
    }
}

/// `C = C0 + C1` with `C0` a section of `AH/H` and `C1` a section of `A^N H / AH`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SplitSection {
    pub c0: Section,
    pub c1: Section,
    /// For each element of the input section, its `(c0, c1)` indices.
    pub parts: Vec<(usize, usize)>,
}

impl SplitSection {
    /// `c -> (c0, c1)` with `c = c0 + c1`.
    pub fn decompose(&self, c: &GroupElement) -> Result<(GroupElement, GroupElement)> {
        let c1 = coset_rep(c, 1);
        let c0 = c.sub(&c1)?;
        Ok((c0, c1))
    }
}

pub fn split_section(s: &Section) -> Result<SplitSection> {
    if s.inner != 0 || s.outer < 1 {
        return Err(Error::arg("split_section needs a canonical section of A^N H / H with N >= 1"));
    }
    if *s != section(s.params, s.outer, 0)? {
        return Err(Error::arg("split_section needs the canonical section"));
    }
    let c0 = section(s.params, 1, 0)?;
    let c1 = section(s.params, s.outer, 1)?;
    let mut split = SplitSection { c0, c1, parts: Vec::with_capacity(s.len()) };
    for c in &s.elements {
        let (a, b) = split.decompose(c)?;
        let i = split.c0.index_of(&a).ok_or_else(|| Error::Invariant(format!("{a} not in C0")))?;
        let j = split.c1.index_of(&b).ok_or_else(|| Error::Invariant(format!("{b} not in C1")))?;
        if split.c0.elements[i] != a || split.c1.elements[j] != b {
            return Err(Error::Invariant(format!("{c} does not split canonically")));
        }
        split.parts.push((i, j));
    }
    Ok(split)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::localfield::Mode;
    use proptest::prelude::*;

    fn c(p: u32) -> GroupParams {
        GroupParams::carry(p).unwrap()
    }

    fn r(params: GroupParams, num: i64, vexp: i64) -> GroupElement {
        GroupElement::from_ratio(params, BigInt::from(num), vexp)
    }

    #[test]
    fn coset_rep_examples() {
        let p = c(2);
        assert_eq!(coset_rep(&r(p, 3, 2), 0), r(p, 3, 2));
        assert_eq!(coset_rep(&r(p, 3, 2), 1), r(p, 1, 2));
        assert!(coset_rep(&p.zero(), 5).is_zero());
        // negative elements reduce into [0, p^-n)
        assert_eq!(coset_rep(&r(p, -1, 2), 0), r(p, 3, 2));
        let m = GroupParams::modular(3).unwrap();
        let x = m.parse("[-2]121").unwrap();
        assert_eq!(coset_rep(&x, 1), m.parse("[-2]1").unwrap());
    }

    #[test]
    fn section_examples() {
        let p = c(2);
        let s = section(p, 2, 0).unwrap();
        assert_eq!(s.elements(), &[r(p, 0, 0), r(p, 1, 2), r(p, 1, 1), r(p, 3, 2)]);
        assert_eq!(section(p, 3, 3).unwrap().elements(), &[p.zero()]);
        assert_eq!(section(p, 1, 0).unwrap().len(), 2);
        assert!(section(p, 0, 1).is_err());
        assert_eq!(s.to_string(), "{0/2^0, 1/2^2, 1/2^1, 3/2^2}");
    }

    #[test]
    fn split_examples() {
        let p = c(2);
        let s = section(p, 2, 0).unwrap();
        let sp = split_section(&s).unwrap();
        assert_eq!(sp.c0.elements(), &[p.zero(), r(p, 1, 1)]);
        assert_eq!(sp.c1.elements(), &[p.zero(), r(p, 1, 2)]);
        assert_eq!(sp.decompose(&r(p, 3, 2)).unwrap(), (r(p, 1, 1), r(p, 1, 2)));
        assert_eq!(sp.parts[3], (1, 1));

        let p3 = c(3);
        let sp3 = split_section(&section(p3, 1, 0).unwrap()).unwrap();
        assert_eq!(sp3.c0.elements(), &[p3.zero(), r(p3, 1, 1), r(p3, 2, 1)]);
        assert_eq!(sp3.c1.elements(), &[p3.zero()]);

        let m = GroupParams::modular(2).unwrap();
        let spm = split_section(&section(m, 2, 0).unwrap()).unwrap();
        assert_eq!(spm.c0.elements(), &[m.zero(), m.parse("[-1]1").unwrap()]);
        assert_eq!(spm.c1.elements(), &[m.zero(), m.parse("[-2]1").unwrap()]);

        assert!(split_section(&section(p, 2, 1).unwrap()).is_err());
        assert!(split_section(&section(p, 0, 0).unwrap()).is_err());
    }

    #[test]
    fn split_reassembles_bijectively() {
        for params in [c(2), c(3), GroupParams::modular(3).unwrap()] {
            let s = section(params, 3, 0).unwrap();
            let sp = split_section(&s).unwrap();
            let mut seen = std::collections::BTreeSet::new();
            for (c, &(i, j)) in s.elements().iter().zip(&sp.parts) {
                let sum = sp.c0.elements()[i].add(&sp.c1.elements()[j]).unwrap();
                assert_eq!(&sum, c);
                assert!(seen.insert((i, j)));
            }
            assert_eq!(seen.len(), sp.c0.len() * sp.c1.len());
        }
    }

    #[test]
    fn same_ball_examples() {
        let p = c(2);
        let half = r(p, 1, 1);
        assert!(same_ball(&p.zero(), &p.one(), 0).unwrap());
        assert!(!same_ball(&p.zero(), &half, 0).unwrap());
        assert!(same_ball(&p.zero(), &half, 1).unwrap());
        let b = ball_of(&r(p, 7, 2), 1);
        assert_eq!(b.to_string(), "Q[1]@1/2^2");
        assert_eq!(b.measure(), BigRational::from_integer(BigInt::from(2)));
        let pb = phase_ball_of(&half, &p.one(), 0);
        assert_eq!(pb.measure(), BigRational::from_integer(BigInt::from(1)));
        assert!(pb.contains(&r(p, 3, 1), &p.zero()).unwrap());
    }

    fn sample(params: GroupParams) -> impl Strategy<Value = GroupElement> {
        let p = params.p();
        (-5i64..3, proptest::collection::vec(0..p, 0..8))
            .prop_map(move |(lo, ds)| GroupElement::from_digits(params, lo, &ds))
    }

    fn params() -> impl Strategy<Value = GroupParams> {
        (prop_oneof![Just(2u32), Just(3)], any::<bool>())
            .prop_map(|(p, cm)| GroupParams::new(p, if cm { Mode::Carry } else { Mode::Modular }).unwrap())
    }

    proptest! {
        #[test]
        fn coset_rep_properties((x, y) in params().prop_flat_map(|g| (sample(g), sample(g))), n in -3i64..4) {
            let rep = coset_rep(&x, n);
            prop_assert_eq!(coset_rep(&rep, n), rep.clone());
            prop_assert!(x.sub(&rep).unwrap().valuation().at_least(-n));
            let same = same_ball(&x, &y, n).unwrap();
            prop_assert_eq!(same, coset_rep(&y, n) == rep);
            // nesting: Q_n(x) inside Q_m(x) for m >= n
            if same {
                prop_assert!(same_ball(&x, &y, n + 1).unwrap());
            }
            prop_assert_eq!(ball_of(&x, n) == ball_of(&y, n), same);
        }

        #[test]
        fn balls_tile_the_window((x, big, small) in params().prop_flat_map(|g| (sample(g), 0i64..4, -2i64..2))) {
            // balls Q_n(A^n c), c in section(N - n, 0), tile A^N H
            let (outer, n) = (big, small.min(big));
            let params = x.params();
            let cs = section(params, outer - n, 0).unwrap();
            let balls: Vec<Ball> = cs.elements().iter().map(|c| ball_of(&c.apply_automorphism(n), n)).collect();
            let distinct: std::collections::BTreeSet<_> = balls.iter().cloned().collect();
            prop_assert_eq!(distinct.len(), balls.len());
            // strip the exponents below -N to land in A^N H
            let y = x.sub(&coset_rep(&x, outer)).unwrap();
            prop_assert!(y.valuation().at_least(-outer));
            let hits = balls.iter().filter(|b| b.contains(&y).unwrap()).count();
            prop_assert_eq!(hits, 1);
        }
    }
}
