mod common;

use std::f64::consts::{E, PI, TAU};

use num_complex::Complex64 as C;
use proptest::prelude::*;
use wrapfree::class_l::{classl_f, solve_atoms, z_plus_i_example};
use wrapfree::convolutions::total_variation;
use wrapfree::measures::{Domain, GridPoint, ProfileAtom};
use wrapfree::numerics::angle_grid;
use wrapfree::transforms::{recover_circle, recover_line, DEFAULT_LADDER};
use wrapfree::wrapping::{atom_correspondence, unwrap_descriptor, wrap_descriptor, wrap_direct};
use wrapfree::{BooleanIDDescriptor, CircleMeasure, ClassLDescriptor, Error, MeasureProfile};

fn line_profile(xs: &[f64], density: impl Fn(f64) -> f64) -> MeasureProfile {
    let pts = xs.iter().map(|&x| GridPoint { abscissa: x, density: density(x) }).collect();
    MeasureProfile::new(Domain::Line, Vec::new(), pts, "analytic")
}

fn disk_samples() -> Vec<C> {
    (0..30).map(|k| C::from_polar(0.03 * k as f64, 2.1 * k as f64)).collect()
}

#[test]
fn point_mass_wraps_to_rotated_point() {
    for a in [-3.0, 0.0, 0.5, 9.0] {
        let b = wrap_descriptor(&ClassLDescriptor::point_mass(a));
        assert!((b.gamma - C::from_polar(1.0, -a)).norm() < 1e-15);
        assert!(b.sigma.is_zero());
    }
}

#[test]
fn cauchy_wraps_to_contraction() {
    let t = 1.3;
    let eta = wrap_descriptor(&ClassLDescriptor::cauchy(t).unwrap()).to_handle();
    for z in disk_samples() {
        assert!((eta.eval(z).unwrap() - (-t).exp() * z).norm() < 1e-15);
    }
}

#[test]
fn z_plus_i_wraps_to_closed_form_eta() {
    let eta = wrap_descriptor(&z_plus_i_example()).to_handle();
    for z in disk_samples() {
        let expected = z / E * (C::i() * z).exp();
        assert!((eta.eval(z).unwrap() - expected).norm() < 1e-15);
    }
}

#[test]
fn unwrap_examples() {
    let d = unwrap_descriptor(&BooleanIDDescriptor::point_mass(C::new(1.0, 0.0)).unwrap(), 0);
    assert_eq!(d.beta, 0.0);
    assert!(d.sigma.is_zero());
    let haar = BooleanIDDescriptor::new(C::new(1.0, 0.0), CircleMeasure::haar(1.0).unwrap()).unwrap();
    let d = unwrap_descriptor(&haar, 1);
    assert!((d.beta - TAU).abs() < 1e-15);
    assert_eq!(wrap_descriptor(&d).sigma, haar.sigma);
    assert!((wrap_descriptor(&d).gamma - haar.gamma).norm() < 1e-15);
}

#[test]
fn wrapped_cauchy_by_direct_sum() {
    let n = 256usize;
    let reach = 70 * n as i64;
    let xs: Vec<f64> = (-reach..=reach).map(|j| TAU * j as f64 / n as f64).collect();
    let t = 1.0;
    let line = line_profile(&xs, |x| t / (PI * (x * x + t * t)));
    let circle = wrap_direct(&line, &angle_grid(n), Some(64)).unwrap();
    for g in &circle.density_grid {
        let q = (-t).exp();
        let exact = (1.0 - q * q) / (TAU * (C::from_polar(1.0, g.abscissa) - q).norm_sqr());
        assert!((g.density - exact).abs() < 1e-6, "{} vs {exact}", g.density);
    }
}

#[test]
fn atom_at_two_pi_wraps_to_one() {
    let p = MeasureProfile::new(
        Domain::Line,
        vec![ProfileAtom { at: TAU, weight: 1.0 }],
        vec![GridPoint { abscissa: -1.0, density: 0.0 }, GridPoint { abscissa: 1.0, density: 0.0 }],
        "atom",
    );
    let w = wrap_direct(&p, &angle_grid(16), Some(4)).unwrap();
    assert_eq!(w.atoms.len(), 1);
    assert!(w.atoms[0].at.abs() < 1e-12 || (w.atoms[0].at - TAU).abs() < 1e-12);
    assert_eq!(w.atoms[0].weight, 1.0);
}

#[test]
fn arcsine_wrap_is_far_from_dirac() {
    // Chebyshev nodes avoid the endpoint singularities of 1/(π√(16π² − x²)).
    let n = 4000;
    let xs: Vec<f64> = (0..n).rev().map(|k| 4.0 * PI * (PI * (k as f64 + 0.5) / n as f64).cos()).collect();
    let line = line_profile(&xs, |x| 1.0 / (PI * (16.0 * PI * PI - x * x).sqrt()));
    assert!(line.captured_mass > 0.99);
    let angles = angle_grid(512);
    let wrapped = wrap_direct(&line, &angles, Some(3)).unwrap();
    assert!(wrapped.atoms.is_empty());
    let flat: Vec<GridPoint> = angles.iter().map(|&a| GridPoint { abscissa: a, density: 0.0 }).collect();
    let dirac = MeasureProfile::new(Domain::Circle, vec![ProfileAtom { at: 0.0, weight: 1.0 }], flat, "δ₁");
    assert!(total_variation(&wrapped, &dirac) > 0.5);
}

#[test]
fn direct_sum_needs_mass() {
    let line = line_profile(&[0.0, 0.1], |_| 1.0);
    assert!(matches!(wrap_direct(&line, &angle_grid(8), None), Err(Error::InsufficientMass { .. })));
}

#[test]
fn direct_and_transform_wraps_agree() {
    let d = z_plus_i_example();
    let n = 256usize;
    let reach = 65 * n as i64;
    let xs: Vec<f64> = (-reach..=reach).map(|j| TAU * j as f64 / n as f64).collect();
    let direct = wrap_direct(&recover_line(&classl_f(&d), &xs, &DEFAULT_LADDER).unwrap(), &angle_grid(n), Some(64)).unwrap();
    let circle = recover_circle(&wrap_descriptor(&d).to_handle(), &angle_grid(n), &DEFAULT_LADDER).unwrap();
    for (a, b) in direct.density_grid.iter().zip(&circle.density_grid) {
        assert!((a.density - b.density).abs() < 1e-5);
    }
}

#[test]
fn point_mass_correspondence() {
    let pairs = atom_correspondence(&ClassLDescriptor::point_mass(1.0), 1).unwrap();
    assert_eq!(pairs.len(), 1);
    assert_eq!(pairs[0].x, 1.0);
    assert!((pairs[0].theta - (TAU - 1.0)).abs() < 1e-15);
    assert_eq!((pairs[0].line_weight, pairs[0].circle_weight), (1.0, 1.0));
}

#[test]
fn unit_point_correspondence() {
    let d = ClassLDescriptor::new(0.0, CircleMeasure::point(0.0, 1.0).unwrap()).unwrap();
    let pairs = atom_correspondence(&d, 5).unwrap();
    let k0 = pairs.iter().find(|p| p.x > 0.0 && p.x < TAU).unwrap();
    assert!((k0.circle_weight - 1.0 / (1.5 + k0.x * k0.x / 2.0)).abs() < 1e-6);
    assert!((k0.theta - (TAU - k0.x)).abs() < 1e-12);
    for p in &pairs {
        assert!((p.line_weight - p.circle_weight).abs() < 1e-6);
    }
}

#[test]
fn atom_families_accumulate_at_sigma_atoms() {
    let d = ClassLDescriptor::new(0.3, CircleMeasure::from_atoms(&[(1.0, 0.5), (4.0, 0.25)]).unwrap()).unwrap();
    let sol = solve_atoms(&d, 200).unwrap();
    for (j, theta) in [1.0f64, 4.0].into_iter().enumerate() {
        let family = sol.roots.iter().filter(|r| r.pole_atom == j);
        let (neg, pos): (Vec<_>, Vec<_>) = family.map(|r| (r.x, r.offset.abs())).partition(|p| p.0 < 0.0);
        // The circle image e^{−ix} approaches e^{iθ_j}: the offset to the pole shrinks monotonically outward.
        assert!(pos.windows(2).all(|w| w[1].1 <= w[0].1), "θ = {theta}");
        assert!(neg.windows(2).all(|w| w[0].1 <= w[1].1), "θ = {theta}");
        assert!(pos.last().unwrap().1 < 1e-3);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn functional_identity(d in common::descriptor(), z in common::upper_point()) {
        let f = classl_f(&d).eval(z).unwrap();
        let eta = wrap_descriptor(&d).to_handle().eval((C::i() * z).exp()).unwrap();
        prop_assert!(((C::i() * f).exp() - eta).norm() < 1e-12);
    }

    #[test]
    fn unwrap_then_wrap_is_identity(b in common::boolean_id(), n in -4i64..4) {
        let back = wrap_descriptor(&unwrap_descriptor(&b, n));
        prop_assert!((back.gamma - b.gamma).norm() < 1e-14);
        prop_assert_eq!(back.sigma, b.sigma);
    }
}
