mod common;

use std::f64::consts::{PI, TAU};

use num_complex::Complex64 as C;
use proptest::prelude::*;
use wrapfree::levy::{
    bp_beta, bp_pair_map, build_additive_id, build_mult_id, free_gaussian_pair, free_gaussian_preimage_check,
    loewner_residual, mult_free_sigma, rk4_flow, AdditiveBuild, CanonicalPairR, GeneratorHandle, IdKind, MultBuild,
    ODE_STEP,
};
use wrapfree::measures::RealAtomicMeasure;
use wrapfree::wrapping::wrap_handle;
use wrapfree::{BooleanIDDescriptor, CircleMeasure};

fn tau(pairs: &[(f64, f64)]) -> RealAtomicMeasure {
    RealAtomicMeasure::from_pairs(pairs).unwrap()
}

fn upper() -> Vec<C> {
    (0..20).map(|k| C::new(-5.0 + 0.5 * k as f64, 0.4 + 0.3 * (k % 5) as f64)).collect()
}

fn disk(radius: f64) -> Vec<C> {
    (1..=20).map(|k| C::from_polar(radius * k as f64 / 20.0, 1.9 * k as f64)).collect()
}

fn additive(kind: IdKind, pair: &CanonicalPairR) -> wrapfree::TransformHandle {
    build_additive_id(kind, pair).transform().cloned().unwrap()
}

#[test]
fn empty_tau_gives_a_point_mass() {
    let pair = CanonicalPairR::new(1.3, RealAtomicMeasure::default());
    for kind in [IdKind::Boolean, IdKind::Free, IdKind::Monotone] {
        let f = additive(kind, &pair);
        for z in upper() {
            assert!((f.eval(z).unwrap() - (z - 1.3)).norm() < 1e-9, "{kind:?} at {z}");
        }
    }
}

#[test]
fn boolean_with_mass_at_zero() {
    let t = 0.8;
    let f = additive(IdKind::Boolean, &CanonicalPairR::new(0.0, tau(&[(0.0, t)])));
    for z in upper() {
        assert!((f.eval(z).unwrap() - (z - t / z)).norm() < 1e-14);
    }
}

#[test]
fn classical_build_is_a_characteristic_function() {
    let pair = CanonicalPairR::new(0.5, tau(&[(0.0, 1.0)]));
    let AdditiveBuild::Characteristic(phi) = build_additive_id(IdKind::Classical, &pair) else {
        panic!("classical kind should give a characteristic function");
    };
    for t in [-2.0, 0.3, 1.7] {
        let exact = C::new(-0.5 * t * t, 0.5 * t).exp();
        assert!((phi.eval(t) - exact).norm() < 1e-15);
    }
}

#[test]
fn haar_flow_matches_linear_ode() {
    let (beta, h) = (0.7, 0.6);
    let eta = build_mult_id(IdKind::Monotone, &BooleanIDDescriptor::new(C::from_polar(1.0, -beta), CircleMeasure::haar(h).unwrap()).unwrap())
        .eta()
        .unwrap();
    for z in disk(0.95) {
        let exact = C::new(-h, -beta).exp() * z;
        assert!((eta.eval(z).unwrap() - exact).norm() < 1e-8);
    }
}

#[test]
fn empty_sigma_gives_a_rotation() {
    let gamma = C::from_polar(1.0, -1.1);
    let b = BooleanIDDescriptor::new(gamma, CircleMeasure::zero()).unwrap();
    for kind in [IdKind::Boolean, IdKind::Free, IdKind::Monotone] {
        let eta = build_mult_id(kind, &b).eta().unwrap();
        for z in disk(0.9) {
            assert!((eta.eval(z).unwrap() - gamma * z).norm() < 1e-9, "{kind:?}");
        }
    }
    let MultBuild::Fourier(series) = build_mult_id(IdKind::Classical, &b) else { panic!() };
    for p in -4..=4 {
        assert!((series.coefficient(p) - gamma.powi(p as i32)).norm() < 1e-14);
    }
}

#[test]
fn free_gaussian_sigma_transform() {
    let b = free_gaussian_pair();
    for z in disk(0.9) {
        let exact = (0.5 * (1.0 + z) / (1.0 - z)).exp();
        assert!((mult_free_sigma(&b, z) - exact).norm() < 1e-14);
    }
    let eta = build_mult_id(IdKind::Free, &b).eta().unwrap();
    for z in disk(0.5) {
        let w = eta.eval(z).unwrap();
        assert!((w * mult_free_sigma(&b, w) - z).norm() < 1e-12);
    }
}

#[test]
fn bp_map_examples() {
    let b = bp_pair_map(&CanonicalPairR::new(0.0, tau(&[(0.0, 1.0)]))).unwrap();
    assert_eq!(b.sigma, CircleMeasure::point(0.0, 0.5).unwrap());
    assert!((b.gamma - 1.0).norm() < 1e-15);

    let b = bp_pair_map(&CanonicalPairR::new(0.9, RealAtomicMeasure::default())).unwrap();
    assert!(b.sigma.is_zero());
    assert!((b.gamma - C::from_polar(1.0, -0.9)).norm() < 1e-15);

    let b = bp_pair_map(&CanonicalPairR::new(0.0, tau(&[(PI, 1.0)]))).unwrap();
    let atom = b.sigma.atoms()[0];
    assert!((atom.theta.rem_euclid(TAU) - PI).abs() < 1e-12);
    assert!((atom.mass - 2.0 * (PI * PI + 1.0) / (PI * PI)).abs() < 1e-12);
}

#[test]
fn bp_sigma_mass_is_the_closed_form_sum() {
    let t = tau(&[(-2.0, 0.1), (0.0, 0.3), (1.5, 0.2), (4.0, 0.25)]);
    let b = bp_pair_map(&CanonicalPairR::new(0.4, t.clone())).unwrap();
    let expected: f64 = t
        .atoms()
        .iter()
        .map(|a| if a.x == 0.0 { 0.5 * a.w } else { (1.0 - a.x.cos()) * (a.x * a.x + 1.0) / (a.x * a.x) * a.w })
        .sum();
    assert!((b.sigma.total_mass() - expected).abs() < 1e-14);
}

#[test]
fn periodized_pairs_satisfy_the_sigma_tau_identity() {
    let pair = CanonicalPairR::periodized(0.2, tau(&[(0.0, 0.5), (1.0, 0.25)]));
    let b = bp_pair_map(&pair).unwrap();
    for z in upper() {
        assert!(wrapfree::levy::sigma_tau_residual(&pair, &b, z) < 1e-8);
    }
    let beta = bp_beta(&pair, &b.sigma).unwrap();
    assert!((C::from_polar(1.0, -beta) - b.gamma).norm() < 1e-8);
}

#[test]
fn bp_intertwines_the_builders() {
    let pair = CanonicalPairR::periodized(0.3, tau(&[(0.0, 0.4), (2.0, 0.1)]));
    let b = bp_pair_map(&pair).unwrap();
    for kind in [IdKind::Boolean, IdKind::Free, IdKind::Monotone] {
        let wrapped = wrap_handle(&additive(kind, &pair)).unwrap();
        let eta = build_mult_id(kind, &b).eta().unwrap();
        for z in disk(0.5) {
            let err = (wrapped.eval(z).unwrap() - eta.eval(z).unwrap()).norm();
            assert!(err < 1e-6, "{kind:?} at {z}: {err:e}");
        }
    }
}

#[test]
fn classical_wrap_matches_circle_coefficients() {
    let pair = CanonicalPairR::new(0.3, tau(&[(0.0, 0.5), (1.0, 0.25), (-2.5, 0.2)]));
    let AdditiveBuild::Characteristic(phi) = build_additive_id(IdKind::Classical, &pair) else { panic!() };
    let MultBuild::Fourier(series) = build_mult_id(IdKind::Classical, &bp_pair_map(&pair).unwrap()) else { panic!() };
    for p in -32..=32 {
        assert!((phi.wrapped_coefficient(p) - series.coefficient(p)).norm() < 1e-8, "p = {p}");
    }
}

#[test]
fn free_gaussian_preimage_weights() {
    for n in [0, 2] {
        let atoms = free_gaussian_preimage_check(n);
        assert_eq!(atoms.len(), 7);
        for a in &atoms {
            assert!((a.w - 1.0 / (1.0 + a.x * a.x)).abs() < 1e-4, "x = {}: {}", a.x, a.w);
        }
        let at = |k: f64| atoms.iter().find(|a| (a.x - TAU * k).abs() < 1e-12).unwrap().w;
        assert!((at(0.0) - 1.0).abs() < 1e-4);
        assert!((at(1.0) - 0.02469).abs() < 1e-4);
        assert!((at(-1.0) - at(1.0)).abs() < 1e-12);
    }
}

#[test]
fn loewner_residual_examples() {
    let cauchy = BooleanIDDescriptor::new(C::new(1.0, 0.0), CircleMeasure::haar(1.0).unwrap()).unwrap();
    assert!(loewner_residual(&cauchy, 0.5, C::new(0.2, 0.1), 1e-4).unwrap() < 1e-8);

    let b = BooleanIDDescriptor::new(C::from_polar(1.0, -0.3), CircleMeasure::point(0.0, 1.0).unwrap()).unwrap();
    let z = C::new(0.1, 0.25);
    let (r1, r2) = (loewner_residual(&b, 0.6, z, 0.02).unwrap(), loewner_residual(&b, 0.6, z, 0.01).unwrap());
    let ratio = r1 / r2;
    assert!((3.0..5.0).contains(&ratio), "{r1:e} / {r2:e} = {ratio}");

    assert!(loewner_residual(&b, 0.1, z, 0.2).is_err());
}

#[test]
fn ode_semigroup_law() {
    let g = GeneratorHandle::multiplicative(0.4, &CircleMeasure::from_atoms(&[(0.5, 0.3), (2.0, 0.4)]).unwrap());
    for (t, s) in [(0.3, 0.3), (0.3, 0.7), (0.7, 0.7)] {
        for z in disk(0.8) {
            let joint = rk4_flow(&g, z, t + s, ODE_STEP).unwrap();
            let split = rk4_flow(&g, rk4_flow(&g, z, s, ODE_STEP).unwrap(), t, ODE_STEP).unwrap();
            assert!((joint - split).norm() < 1e-7);
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn circle_generators_are_periodic(d in common::descriptor(), z in common::upper_point()) {
        let g = GeneratorHandle::additive_from_circle(d.beta, &d.sigma);
        prop_assert!((g.eval(z + TAU) - g.eval(z)).norm() <= 1e-12 * g.eval(z).norm().max(1.0));
    }

    #[test]
    fn generators_point_inward(b in common::boolean_id(), z in common::disk_point(0.95)) {
        let g = GeneratorHandle::multiplicative(-b.gamma.arg(), &b.sigma);
        prop_assert!((g.eval(z) / z).re <= 1e-12);
    }

    #[test]
    fn additive_generators_map_into_upper_half_plane(
        alpha in -3.0..3.0f64,
        atoms in prop::collection::vec((-6.0..6.0f64, 0.0..0.3f64), 0..3),
        z in common::upper_point(),
    ) {
        let pair = CanonicalPairR::new(alpha, tau(&atoms));
        prop_assert!(GeneratorHandle::additive(&pair).eval(z).im >= 0.0);
    }
}
