//! Cross-module properties on random inputs.

use num_complex::Complex64;
use proptest::prelude::*;

use lcagabor::density::{density_profile, separated_decomposition, union_profile, PointSet};
use lcagabor::gabor::{frame_bounds, GaborSystem};
use lcagabor::model::{stft, ModelFunction, ModelSpace};
use lcagabor::random::{random_function, random_phase_points, random_unit_function, Rng64};
use lcagabor::{GroupParams, Mode};

fn params(p: u32, modular: bool) -> GroupParams {
    GroupParams::new(p, if modular { Mode::Modular } else { Mode::Carry }).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn frame_inequality_holds(p in prop::sample::select(vec![2u32, 3]), modular: bool, count in 1usize..24, seed: u64) {
        let g = params(p, modular);
        let space = ModelSpace::new(g, 1, 1).unwrap();
        let mut rng = Rng64::new(seed);
        let lam = random_phase_points(g, 1, 1, count, &mut rng).unwrap();
        let window = random_function(space, &mut rng);
        let sys = GaborSystem::build(window, lam).unwrap();
        let rep = frame_bounds(&sys).unwrap();
        prop_assert!(rep.lower <= rep.upper + 1e-12);
        prop_assert!(rep.rank <= rep.count.min(rep.dim));
        for _ in 0..10 {
            let f = random_unit_function(space, &mut rng);
            let energy: f64 = sys.vectors().iter().map(|v| f.inner(v).unwrap().norm_sqr()).sum();
            prop_assert!(energy >= rep.lower - 1e-8 && energy <= rep.upper + 1e-8);
        }
    }

    #[test]
    fn decomposition_partitions_counts(p in prop::sample::select(vec![2u32, 3, 5]), modular: bool, count in 0usize..48, n in 0i64..=2, seed: u64) {
        let g = params(p, modular);
        let mut rng = Rng64::new(seed);
        let lam = random_phase_points(g, 2, 1, count, &mut rng).unwrap();
        let parts = separated_decomposition(&lam, n, 2).unwrap();
        if parts.is_empty() {
            prop_assert!(lam.is_empty());
        } else {
            prop_assert_eq!(union_profile(&parts, (0, 2), 2).unwrap(), density_profile(&lam, (0, 2), 2).unwrap());
        }
    }

    #[test]
    fn stft_sampling_matches_inner_products(p in prop::sample::select(vec![2u32, 3]), modular: bool, seed: u64) {
        let g = params(p, modular);
        let space = ModelSpace::new(g, 1, 1).unwrap();
        let mut rng = Rng64::new(seed);
        let f = random_function(space, &mut rng);
        let window = random_function(space, &mut rng);
        let lam = random_phase_points(g, 1, 1, 6, &mut rng).unwrap();
        let sys = GaborSystem::build(window.clone(), lam.clone()).unwrap();
        let grid = stft(&f, &window).unwrap();
        for (i, v) in sys.vectors().iter().enumerate() {
            let c = lam.components(i);
            let at = grid.at(c[0], c[1]).unwrap();
            prop_assert!((at - f.inner(v).unwrap()).norm() < 1e-12);
        }
    }
}

#[test]
fn scaling_the_window_scales_the_bounds() {
    let g = params(3, false);
    let space = ModelSpace::new(g, 1, 1).unwrap();
    let mut rng = Rng64::new(4);
    let lam = random_phase_points(g, 1, 1, 20, &mut rng).unwrap();
    let w = random_function(space, &mut rng);
    let a = frame_bounds(&GaborSystem::build(w.clone(), lam.clone()).unwrap()).unwrap();
    let b = frame_bounds(&GaborSystem::build(w.scale(Complex64::new(0.0, 2.0)), lam).unwrap()).unwrap();
    assert!((b.upper - 4.0 * a.upper).abs() < 1e-9 * b.upper);
    assert!((b.lower - 4.0 * a.lower).abs() < 1e-9 * b.upper.max(1.0));
}

#[test]
fn element_text_drives_the_whole_pipeline() {
    let g = params(2, true);
    let space = ModelSpace::new(g, 1, 1).unwrap();
    let h = ModelFunction::indicator(space, 0, &g.parse("[-1]1").unwrap()).unwrap();
    let lam = PointSet::phase_space(g, vec![(g.parse("[-1]1").unwrap(), g.parse("[0]").unwrap())]).unwrap();
    let sys = GaborSystem::build(ModelFunction::indicator(space, 0, &g.zero()).unwrap(), lam).unwrap();
    assert_eq!(sys.vectors()[0], h);
}
