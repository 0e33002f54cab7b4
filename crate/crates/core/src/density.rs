//! Beurling density with respect to `A`, computed at finite scales by
//! bucketing points on their canonical ball keys.
//!
//! `D^+` and `D^-` are limits; here they become [`DensityProfile`] rows, one
//! per scale `n`, with exact rational ratios. The maximum is exact over all of
//! `G` (balls missing the set contribute 0). The minimum runs over the balls
//! tiling a declared region `A^N H`, because over all of `G` it is always 0
//! for a finite set.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Pow, Zero};
use serde::{Serialize, Serializer};

use crate::error::{Error, Result};
use crate::geometry::{coset_rep, p_power, Ball, PhaseBall};
use crate::localfield::{GroupElement, GroupParams};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Ambient {
    Group,
    PhaseSpace,
}

impl Ambient {
    /// Number of `G` factors: the ball `Q_n` has measure `p^(dim * n)`.
    pub fn factors(self) -> u32 {
        match self {
            Ambient::Group => 1,
            Ambient::PhaseSpace => 2,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Points {
    Group(Vec<GroupElement>),
    PhaseSpace(Vec<(GroupElement, GroupElement)>),
}

/// A finite sequence in `G` or `G x G^`; repetitions are kept and order matters.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PointSet {
    params: GroupParams,
    points: Points,
}

/// Canonical ball key: one coset representative per factor.
pub type BallKey = Vec<GroupElement>;

impl PointSet {
    pub fn group(params: GroupParams, points: Vec<GroupElement>) -> Result<Self> {
        if let Some(x) = points.iter().find(|x| x.params() != params) {
            return Err(Error::ParamMismatch(params, x.params()));
        }
        Ok(PointSet { params, points: Points::Group(points) })
    }

    pub fn phase_space(params: GroupParams, points: Vec<(GroupElement, GroupElement)>) -> Result<Self> {
        if let Some((x, xi)) = points.iter().find(|(x, xi)| x.params() != params || xi.params() != params) {
            let other = if x.params() != params { x.params() } else { xi.params() };
            return Err(Error::ParamMismatch(params, other));
        }
        Ok(PointSet { params, points: Points::PhaseSpace(points) })
    }

    /// Product `xs x xis` in row-major order (x outer).
    pub fn product(params: GroupParams, xs: &[GroupElement], xis: &[GroupElement]) -> Result<Self> {
        let pts = xs.iter().flat_map(|x| xis.iter().map(move |xi| (x.clone(), xi.clone()))).collect();
        Self::phase_space(params, pts)
    }

    pub fn empty(params: GroupParams, ambient: Ambient) -> Self {
        let points = match ambient {
            Ambient::Group => Points::Group(Vec::new()),
            Ambient::PhaseSpace => Points::PhaseSpace(Vec::new()),
        };
        PointSet { params, points }
    }

    pub fn params(&self) -> GroupParams {
        self.params
    }

    pub fn ambient(&self) -> Ambient {
        match self.points {
            Points::Group(_) => Ambient::Group,
            Points::PhaseSpace(_) => Ambient::PhaseSpace,
        }
    }

    pub fn points(&self) -> &Points {
        &self.points
    }

    pub fn len(&self) -> usize {
        match &self.points {
            Points::Group(v) => v.len(),
            Points::PhaseSpace(v) => v.len(),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Components of point `i` (one for `G`, two for `G x G^`).
    pub fn components(&self, i: usize) -> Vec<&GroupElement> {
        match &self.points {
            Points::Group(v) => vec![&v[i]],
            Points::PhaseSpace(v) => vec![&v[i].0, &v[i].1],
        }
    }

    pub fn point_text(&self, i: usize) -> String {
        match &self.points {
            Points::Group(v) => v[i].to_string(),
            Points::PhaseSpace(v) => format!("({}, {})", v[i].0, v[i].1),
        }
    }

    /// Keeps the points at the given indices, in the given order.
    pub fn select(&self, idx: &[usize]) -> Self {
        let points = match &self.points {
            Points::Group(v) => Points::Group(idx.iter().map(|&i| v[i].clone()).collect()),
            Points::PhaseSpace(v) => Points::PhaseSpace(idx.iter().map(|&i| v[i].clone()).collect()),
        };
        PointSet { params: self.params, points }
    }

    /// Multiset union, parts concatenated in order.
    pub fn concat(parts: &[PointSet]) -> Result<Self> {
        let first = parts.first().ok_or_else(|| Error::arg("union of no point sets"))?;
        let mut out = PointSet::empty(first.params, first.ambient());
        for part in parts {
            if part.params != first.params {
                return Err(Error::ParamMismatch(first.params, part.params));
            }
            match (&mut out.points, &part.points) {
                (Points::Group(a), Points::Group(b)) => a.extend(b.iter().cloned()),
                (Points::PhaseSpace(a), Points::PhaseSpace(b)) => a.extend(b.iter().cloned()),
                _ => return Err(Error::AmbientMismatch),
            }
        }
        Ok(out)
    }

    /// Multiset of canonical ball keys at scale `n`, as counts.
    pub fn bucket_counts(&self, n: i64) -> BTreeMap<BallKey, u64> {
        let mut out = BTreeMap::new();
        for i in 0..self.len() {
            let key: BallKey = self.components(i).into_iter().map(|c| coset_rep(c, n)).collect();
            *out.entry(key).or_insert(0) += 1;
        }
        out
    }

    fn ensure_in_region(&self, region: i64) -> Result<()> {
        for i in 0..self.len() {
            if self.components(i).iter().any(|c| !c.valuation().at_least(-region)) {
                return Err(Error::arg(format!(
                    "point #{i} {} lies outside the region A^{region} H",
                    self.point_text(i)
                )));
            }
        }
        Ok(())
    }
}

/// A ball in `G` or in `G x G^`.
#[derive(Debug, Clone, Copy)]
pub enum AnyBall<'a> {
    Group(&'a Ball),
    Phase(&'a PhaseBall),
}

pub fn count_in_ball(lam: &PointSet, ball: AnyBall<'_>) -> Result<u64> {
    let mut count = 0;
    match (&lam.points, ball) {
        (Points::Group(v), AnyBall::Group(b)) => {
            for x in v {
                count += b.contains(x)? as u64;
            }
        }
        (Points::PhaseSpace(v), AnyBall::Phase(b)) => {
            for (x, xi) in v {
                count += b.contains(x, xi)? as u64;
            }
        }
        _ => return Err(Error::AmbientMismatch),
    }
    Ok(count)
}

fn ratio_string<S: Serializer>(r: &BigRational, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(&format_ratio(r))
}

/// Exact rational as `a/b` (denominator always printed).
pub fn format_ratio(r: &BigRational) -> String {
    format!("{}/{}", r.numer(), r.denom())
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ProfileRow {
    pub n: i64,
    pub max_count: u64,
    pub min_count: u64,
    #[serde(serialize_with = "ratio_string")]
    pub upper_ratio: BigRational,
    #[serde(serialize_with = "ratio_string")]
    pub lower_ratio: BigRational,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct DensityProfile {
    pub ambient: Ambient,
    pub region: i64,
    pub rows: Vec<ProfileRow>,
}

impl fmt::Display for DensityProfile {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "{:>4} {:>10} {:>10} {:>14} {:>14}", "n", "max_count", "min_count", "upper_ratio", "lower_ratio")?;
        for r in &self.rows {
            writeln!(
                f,
                "{:>4} {:>10} {:>10} {:>14} {:>14}",
                r.n,
                r.max_count,
                r.min_count,
                format_ratio(&r.upper_ratio),
                format_ratio(&r.lower_ratio)
            )?;
        }
        Ok(())
    }
}

/// Does the number of nonempty buckets reach the number of balls tiling the region?
fn covers_region(params: GroupParams, ambient: Ambient, region: i64, n: i64, nonempty: usize) -> bool {
    let exp = ambient.factors() as u64 * (region - n) as u64;
    let balls: BigInt = Pow::pow(BigInt::from(params.p()), exp);
    BigInt::from(nonempty) >= balls
}

/// One profile row at ball scale `scale`, normalized by `modulus^(dim * step)`.
fn profile_row(lam: &PointSet, label: i64, scale: i64, norm_exp: i64, region: i64) -> ProfileRow {
    let buckets = lam.bucket_counts(scale);
    let max_count = buckets.values().copied().max().unwrap_or(0);
    let min_count = if covers_region(lam.params, lam.ambient(), region, scale, buckets.len()) {
        buckets.values().copied().min().unwrap_or(0)
    } else {
        0
    };
    let norm = p_power(lam.params.p(), lam.ambient().factors() as i64 * norm_exp);
    ProfileRow {
        n: label,
        max_count,
        min_count,
        upper_ratio: BigRational::from_integer(BigInt::from(max_count)) / &norm,
        lower_ratio: BigRational::from_integer(BigInt::from(min_count)) / &norm,
    }
}

fn check_range(n_range: (i64, i64), region: i64) -> Result<()> {
    let (lo, hi) = n_range;
    if lo > hi {
        return Err(Error::arg(format!("empty scale range [{lo}, {hi}]")));
    }
    if hi > region {
        return Err(Error::arg(format!("scale {hi} exceeds region {region}")));
    }
    Ok(())
}

pub fn density_profile(lam: &PointSet, n_range: (i64, i64), region: i64) -> Result<DensityProfile> {
    check_range(n_range, region)?;
    lam.ensure_in_region(region)?;
    let rows = (n_range.0..=n_range.1).map(|n| profile_row(lam, n, n, n, region)).collect();
    Ok(DensityProfile { ambient: lam.ambient(), region, rows })
}

/// At most one point per ball of scale `n`.
pub fn is_uniformly_separated(lam: &PointSet, n: i64) -> bool {
    lam.bucket_counts(n).values().all(|&c| c <= 1)
}

/// Splits `lam` into uniformly separated parts `Lambda_{j, c0}`.
///
/// Inside each ball of scale `n`, points are labeled `1, 2, ...` in input
/// order; `c0` is the digit (one per factor) at exponent `-n-1`, i.e. the
/// `C0`-component of the ball's section representative `A^{-n} key`. Part
/// `(j, c0)` gathers the `j`-th point of every ball whose `c0` matches. Only
/// nonempty parts are returned, ordered by `(j, c0)`.
pub fn separated_decomposition(lam: &PointSet, n: i64, region: i64) -> Result<Vec<PointSet>> {
    lam.ensure_in_region(region)?;
    let mut labels: BTreeMap<BallKey, usize> = BTreeMap::new();
    let mut parts: BTreeMap<(usize, Vec<u32>), Vec<usize>> = BTreeMap::new();
    for i in 0..lam.len() {
        let comps = lam.components(i);
        let key: BallKey = comps.iter().map(|c| coset_rep(c, n)).collect();
        let label = labels.entry(key).or_insert(0);
        *label += 1;
        let c0: Vec<u32> = comps.iter().map(|c| c.digit(-n - 1)).collect();
        parts.entry((*label, c0)).or_default().push(i);
    }
    Ok(parts.values().map(|idx| lam.select(idx)).collect())
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ScaleBound {
    pub m: i64,
    pub max_count: u64,
    /// `|A|^(m-n+1) * N_n`, with `|A| = p^dim` on phase space.
    pub bound: u128,
    pub holds: bool,
    pub equality: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct FiniteDensityReport {
    pub n: i64,
    pub n_n: u64,
    pub rows: Vec<ScaleBound>,
}

impl FiniteDensityReport {
    pub fn holds(&self) -> bool {
        self.rows.iter().all(|r| r.holds)
    }
}

/// `N_n` = the largest ball count at scale `n`, and the propagated bound
/// `max count at scale m <= |A|^(m-n+1) N_n` for every `n < m <= N`.
pub fn finite_density_check(lam: &PointSet, n: i64, region: i64) -> Result<FiniteDensityReport> {
    if n > region {
        return Err(Error::arg(format!("scale {n} exceeds region {region}")));
    }
    let max_at = |s: i64| lam.bucket_counts(s).values().copied().max().unwrap_or(0);
    let n_n = max_at(n);
    let modulus = (lam.params.p() as u128).pow(lam.ambient().factors());
    let mut rows = Vec::new();
    for m in n + 1..=region {
        let max_count = max_at(m);
        let bound = u32::try_from(m - n + 1)
            .ok()
            .and_then(|e| modulus.checked_pow(e))
            .and_then(|b| b.checked_mul(n_n as u128))
            .unwrap_or(u128::MAX);
        rows.push(ScaleBound {
            m,
            max_count,
            bound,
            holds: (max_count as u128) <= bound,
            equality: max_count as u128 == bound,
        });
    }
    Ok(FiniteDensityReport { n, n_n, rows })
}

/// Profile of the multiset union, verifying per-ball additivity at every scale.
pub fn union_profile(lams: &[PointSet], n_range: (i64, i64), region: i64) -> Result<DensityProfile> {
    let union = PointSet::concat(lams)?;
    check_range(n_range, region)?;
    for n in n_range.0..=n_range.1 {
        let mut summed: BTreeMap<BallKey, u64> = BTreeMap::new();
        for part in lams {
            for (k, c) in part.bucket_counts(n) {
                *summed.entry(k).or_insert(0) += c;
            }
        }
        if summed != union.bucket_counts(n) {
            return Err(Error::Invariant(format!("ball counts are not additive at scale {n}")));
        }
    }
    density_profile(&union, n_range, region)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct InvarianceRow {
    /// Scale under `B = A^r`.
    pub n: i64,
    /// The matching scale `r n` under `A`.
    pub a_scale: i64,
    #[serde(serialize_with = "ratio_string")]
    pub upper_b: BigRational,
    #[serde(serialize_with = "ratio_string")]
    pub lower_b: BigRational,
    #[serde(serialize_with = "ratio_string")]
    pub upper_a: BigRational,
    #[serde(serialize_with = "ratio_string")]
    pub lower_a: BigRational,
    pub equal: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct InvarianceReport {
    pub power: i64,
    pub rows: Vec<InvarianceRow>,
}

impl InvarianceReport {
    pub fn all_equal(&self) -> bool {
        self.rows.iter().all(|r| r.equal)
    }
}

/// Compares the profile under `B = A^r` (balls `B^n H`, modulus `|A|^r`)
/// with the `A`-profile at scales `r n`, for every `n` with `r n` in range.
pub fn automorphism_invariance_check(
    lam: &PointSet,
    power: i64,
    n_range: (i64, i64),
    region: i64,
) -> Result<InvarianceReport> {
    if power < 1 {
        return Err(Error::arg(format!("automorphism power must be >= 1, got {power}")));
    }
    let a_profile = density_profile(lam, n_range, region)?;
    let lo = n_range.0.div_euclid(power) + (n_range.0.rem_euclid(power) != 0) as i64;
    let hi = n_range.1.div_euclid(power);
    let mut rows = Vec::new();
    for n in lo..=hi {
        let b_row = b_profile_row(lam, power, n, region);
        let a_row = &a_profile.rows[(power * n - n_range.0) as usize];
        rows.push(InvarianceRow {
            n,
            a_scale: power * n,
            equal: b_row.0 == a_row.upper_ratio && b_row.1 == a_row.lower_ratio,
            upper_b: b_row.0,
            lower_b: b_row.1,
            upper_a: a_row.upper_ratio.clone(),
            lower_a: a_row.lower_ratio.clone(),
        });
    }
    Ok(InvarianceReport { power, rows })
}

/// Ratios under `B = A^r` at `B`-scale `n`: balls are `B^n H`, the measure
/// normalizer is `|B|^n = (p^r)^n`.
fn b_profile_row(lam: &PointSet, power: i64, n: i64, region: i64) -> (BigRational, BigRational) {
    let scale = power * n;
    let buckets = lam.bucket_counts(scale);
    let max = buckets.values().copied().max().unwrap_or(0);
    let min = if covers_region(lam.params, lam.ambient(), region, scale, buckets.len()) {
        buckets.values().copied().min().unwrap_or(0)
    } else {
        0
    };
    let modulus_b = BigRational::from_integer(Pow::pow(BigInt::from(lam.params.p()), power as u64));
    let mut norm = BigRational::from_integer(BigInt::from(1));
    for _ in 0..n.unsigned_abs() * lam.ambient().factors() as u64 {
        norm *= &modulus_b;
    }
    if n < 0 {
        norm = norm.recip();
    }
    let to_ratio = |c: u64| {
        let c = BigRational::from_integer(BigInt::from(c));
        if c.is_zero() {
            c
        } else {
            c / &norm
        }
    };
    (to_ratio(max), to_ratio(min))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::{ball_of, phase_ball_of, section};

    fn c(p: u32) -> GroupParams {
        GroupParams::carry(p).unwrap()
    }

    fn one() -> BigRational {
        BigRational::from_integer(BigInt::from(1))
    }

    fn int(n: i64) -> BigRational {
        BigRational::from_integer(BigInt::from(n))
    }

    fn sec_set(params: GroupParams, n_outer: i64) -> PointSet {
        PointSet::group(params, section(params, n_outer, 0).unwrap().elements().to_vec()).unwrap()
    }

    #[test]
    fn counts_in_balls() {
        let p = c(2);
        let lam = sec_set(p, 3);
        assert_eq!(count_in_ball(&lam, AnyBall::Group(&ball_of(&p.zero(), 2))).unwrap(), 4);
        let empty = PointSet::empty(p, Ambient::Group);
        assert_eq!(count_in_ball(&empty, AnyBall::Group(&ball_of(&p.zero(), 0))).unwrap(), 0);
        let rep = PointSet::group(p, vec![p.zero(); 5]).unwrap();
        assert_eq!(count_in_ball(&rep, AnyBall::Group(&ball_of(&p.zero(), 0))).unwrap(), 5);
        let pb = phase_ball_of(&p.zero(), &p.zero(), 0);
        assert_eq!(count_in_ball(&rep, AnyBall::Phase(&pb)), Err(Error::AmbientMismatch));
    }

    #[test]
    fn section_has_unit_density() {
        for params in [c(2), c(3), GroupParams::modular(2).unwrap()] {
            let lam = sec_set(params, 3);
            let prof = density_profile(&lam, (0, 3), 3).unwrap();
            for (n, row) in prof.rows.iter().enumerate() {
                let pn = (params.p() as u64).pow(n as u32);
                assert_eq!((row.max_count, row.min_count), (pn, pn));
                assert_eq!((row.upper_ratio.clone(), row.lower_ratio.clone()), (one(), one()));
            }
        }
    }

    #[test]
    fn product_section_has_density_p_to_2k() {
        // k = 1, p = 2: Delta = section(1, -1), Gamma = section(1, -1)
        let p = c(2);
        let d = section(p, 1, -1).unwrap();
        let lam = PointSet::product(p, d.elements(), d.elements()).unwrap();
        let prof = density_profile(&lam, (-1, 1), 1).unwrap();
        for row in &prof.rows {
            assert_eq!(row.upper_ratio, int(4), "n = {}", row.n);
            assert_eq!(row.lower_ratio, int(4), "n = {}", row.n);
        }
    }

    #[test]
    fn singleton_profile_decays() {
        let p = c(2);
        let lam = PointSet::group(p, vec![p.zero()]).unwrap();
        let prof = density_profile(&lam, (0, 3), 3).unwrap();
        for row in &prof.rows {
            assert_eq!(row.max_count, 1);
            assert_eq!(row.upper_ratio, BigRational::new(BigInt::from(1), BigInt::from(1 << row.n)));
        }
        assert_eq!(prof.rows[3].min_count, 1);
        assert_eq!(prof.rows[0].min_count, 0);
    }

    #[test]
    fn profile_rejects_points_outside_region() {
        let p = c(2);
        let lam = PointSet::group(p, vec![p.zero(), p.parse("1/2^3").unwrap()]).unwrap();
        let err = density_profile(&lam, (0, 2), 2).unwrap_err();
        assert!(err.to_string().contains("1/2^3"), "{err}");
        assert!(density_profile(&lam, (0, 4), 3).is_err());
    }

    #[test]
    fn separation_examples() {
        let p = c(2);
        assert!(is_uniformly_separated(&sec_set(p, 3), 0));
        let rep = PointSet::group(p, vec![p.one(), p.one()]).unwrap();
        assert!(!is_uniformly_separated(&rep, -5));
        let pair = PointSet::group(p, vec![p.zero(), p.parse("1/2^1").unwrap()]).unwrap();
        assert!(!is_uniformly_separated(&pair, 1));
        assert!(is_uniformly_separated(&pair, 0));
    }

    fn multiset(lam: &PointSet) -> BTreeMap<BallKey, u64> {
        // exact multiset via a scale fine enough to separate all test points
        lam.bucket_counts(-64)
    }

    #[test]
    fn decomposition_examples() {
        let p = c(2);
        let s = section(p, 2, 0).unwrap();
        let doubled: Vec<_> = s.elements().iter().flat_map(|x| [x.clone(), x.clone()]).collect();
        let lam = PointSet::group(p, doubled).unwrap();
        let parts = separated_decomposition(&lam, 0, 2).unwrap();
        assert!(parts.len() <= 4);
        assert!(parts.iter().all(|q| is_uniformly_separated(q, 0)));
        assert_eq!(multiset(&PointSet::concat(&parts).unwrap()), multiset(&lam));

        let sep = sec_set(p, 2);
        let parts = separated_decomposition(&sep, 0, 2).unwrap();
        assert!(parts.len() <= 2);
        assert_eq!(parts.iter().map(PointSet::len).sum::<usize>(), sep.len());

        assert!(separated_decomposition(&PointSet::empty(p, Ambient::Group), 0, 2).unwrap().is_empty());
    }

    #[test]
    fn scale_propagation_examples() {
        let p = c(2);
        let rep = finite_density_check(&sec_set(p, 3), 0, 3).unwrap();
        assert_eq!(rep.n_n, 1);
        assert!(rep.holds());
        assert_eq!(rep.rows.iter().map(|r| r.max_count).collect::<Vec<_>>(), vec![2, 4, 8]);
        assert_eq!(rep.rows.iter().map(|r| r.bound).collect::<Vec<_>>(), vec![4, 8, 16]);

        let single = PointSet::group(p, vec![p.one()]).unwrap();
        assert!(finite_density_check(&single, -2, 3).unwrap().holds());

        // p^2 copies of one point crowd a single ball at every scale
        let crowd = PointSet::group(p, vec![p.zero(); 4]).unwrap();
        let rep = finite_density_check(&crowd, 0, 2).unwrap();
        assert_eq!(rep.n_n, 4);
        assert!(rep.holds());
        assert!(rep.rows.iter().all(|r| r.max_count == 4 && !r.equality));
    }

    #[test]
    fn union_examples() {
        let p = c(2);
        let s = sec_set(p, 3);
        let prof = union_profile(&[s.clone(), s.clone()], (0, 3), 3).unwrap();
        assert!(prof.rows.iter().all(|r| r.upper_ratio == int(2) && r.lower_ratio == int(2)));
        let with_empty = union_profile(&[s.clone(), PointSet::empty(p, Ambient::Group)], (0, 3), 3).unwrap();
        assert_eq!(with_empty, density_profile(&s, (0, 3), 3).unwrap());
        let phase = PointSet::empty(p, Ambient::PhaseSpace);
        assert_eq!(union_profile(&[s, phase], (0, 3), 3), Err(Error::AmbientMismatch));
    }

    #[test]
    fn invariance_examples() {
        let p = c(2);
        let rep = automorphism_invariance_check(&sec_set(p, 4), 2, (0, 4), 4).unwrap();
        assert_eq!(rep.rows.iter().map(|r| r.n).collect::<Vec<_>>(), vec![0, 1, 2]);
        assert!(rep.all_equal());
        assert!(rep.rows.iter().all(|r| r.upper_b == one()));

        let single = PointSet::group(p, vec![p.zero()]).unwrap();
        let rep = automorphism_invariance_check(&single, 2, (0, 4), 4).unwrap();
        assert!(rep.all_equal());
        assert_eq!(rep.rows[1].upper_b, BigRational::new(BigInt::from(1), BigInt::from(4)));
        assert!(automorphism_invariance_check(&single, 0, (0, 4), 4).is_err());
    }

    #[test]
    fn table_uses_explicit_denominators() {
        let p = c(2);
        let prof = density_profile(&sec_set(p, 1), (0, 1), 1).unwrap();
        let table = prof.to_string();
        assert!(table.contains("1/1"), "{table}");
    }
}
