//! Seeded randomness: SplitMix64 from `rand_xoshiro`, reproducible across platforms.

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_distr::StandardNormal;
use rand_xoshiro::SplitMix64;

use crate::density::PointSet;
use crate::error::Result;
use crate::geometry::{base_p_digits, checked_p_pow};
use crate::localfield::{GroupElement, GroupParams};
use crate::model::{ModelFunction, ModelSpace};

#[derive(Debug, Clone)]
pub struct Rng64(SplitMix64);

impl Rng64 {
    pub fn new(seed: u64) -> Self {
        Rng64(SplitMix64::seed_from_u64(seed))
    }

    pub fn normal(&mut self) -> f64 {
        self.0.sample(StandardNormal)
    }

    pub fn below(&mut self, n: usize) -> usize {
        self.0.random_range(0..n)
    }

    pub fn complex_normal(&mut self) -> Complex64 {
        Complex64::new(self.normal(), self.normal())
    }
}

/// Coefficients i.i.d. complex Gaussian.
pub fn random_function(space: ModelSpace, rng: &mut Rng64) -> ModelFunction {
    let coeffs = (0..space.dim()).map(|_| rng.complex_normal()).collect();
    ModelFunction::new(space, coeffs).expect("length matches")
}

/// Random unit-norm function.
pub fn random_unit_function(space: ModelSpace, rng: &mut Rng64) -> ModelFunction {
    let f = random_function(space, rng);
    let n = f.norm();
    f.scale(Complex64::new(1.0 / n, 0.0))
}

/// Uniform element of `A^region H / A^{-depth} H` (section representative).
pub fn random_element(params: GroupParams, region: i64, depth: i64, rng: &mut Rng64) -> GroupElement {
    let len = (region + depth) as usize;
    let count = checked_p_pow(params.p(), len as u64).expect("small range");
    let digits = base_p_digits(rng.below(count as usize) as u64, params.p(), len);
    GroupElement::from_digits(params, -region, &digits)
}

/// `count` points of `A^region H` drawn from a grid of depth `depth`, so
/// repeats and crowded balls are common.
pub fn random_group_points(
    params: GroupParams,
    region: i64,
    depth: i64,
    count: usize,
    rng: &mut Rng64,
) -> Result<PointSet> {
    let pts = (0..count).map(|_| random_element(params, region, depth, rng)).collect();
    PointSet::group(params, pts)
}

pub fn random_phase_points(
    params: GroupParams,
    region: i64,
    depth: i64,
    count: usize,
    rng: &mut Rng64,
) -> Result<PointSet> {
    let pts = (0..count)
        .map(|_| (random_element(params, region, depth, rng), random_element(params, region, depth, rng)))
        .collect();
    PointSet::phase_space(params, pts)
}
