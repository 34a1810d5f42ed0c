//! The named checks executed by `run_suite`: one per module invariant, the
//! limit-theorem records, and one per acceptance criterion.
//!
//! Each check returns a measured value compared with its tolerance. Counting
//! checks return the number of violations against a tolerance of `0.5`.
//! Acceptance checks return the worst ratio of measured error to threshold
//! (or threshold to measured value for lower bounds) against `1`.

use std::f64::consts::{E, PI, TAU};
use std::sync::OnceLock;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::{gen_random_descriptor, fourier_moments, run_limit_demo, Comparison, SuiteConfig, SuiteReport};
use crate::class_l::{
    atom_root_residual, branch_index, classl_density, classl_f, membership_check, shift, solve_atoms, z_plus_i_example,
    ClassLDescriptor,
};
use crate::convolutions::{
    belinschi_nica_circle, belinschi_nica_lifted, boolean_add, boolean_add_handles, boolean_power_handle, free_add,
    free_power, monotone_compose, mult_boolean, mult_boolean_handles, mult_boolean_power, mult_free, mult_free_power,
    subordination_dist_circle, ClosedForm,
};
use crate::error::{Error, Result};
use crate::levy::{
    bp_pair_map, build_additive_id, build_mult_id, free_gaussian_pair, free_gaussian_preimage_check, loewner_residual,
    monotone_flow_handle, mult_monotone, sigma_tau_residual, AdditiveBuild, CanonicalPairR, FourierSeries,
    GeneratorHandle, IdKind, ODE_STEP,
};
use crate::measures::{
    circle_measure_add, circle_measure_scale, fourier_moment, CircleAtom, CircleMeasure, Domain, FourierDensity,
    GridPoint, MeasureProfile, RealAtomicMeasure, POSITIVITY_GRID,
};
use crate::numerics::{angle_grid, count_local_maxima, linspace, taylor_coefficients, wrapped_cauchy_density};
use crate::transforms::{
    circle_atom_weight, default_tol, invert_continued, line_atom_weight, phi_eval, recover_circle, recover_line,
    self_map_violation, sigma_eval, TransformHandle, C, DEFAULT_LADDER,
};
use crate::wrapping::{
    atom_correspondence, principal_arg, unwrap_descriptor, wrap_descriptor, wrap_direct, wrap_handle, BooleanIDDescriptor,
};

pub type CheckFn = fn(&SuiteConfig) -> Result<f64>;

/// Tolerance used by counting checks.
pub const COUNT_TOL: f64 = 0.5;

pub struct Check {
    pub name: &'static str,
    pub tolerance: f64,
    pub comparison: Comparison,
    pub run: CheckFn,
}

/// A measured value and whether it passes at the default tolerance.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CheckOutcome {
    pub measured: f64,
    pub pass: bool,
}

impl Check {
    pub fn evaluate(&self, config: &SuiteConfig) -> Result<CheckOutcome> {
        let measured = (self.run)(config)?;
        let tol = config.tolerance(self.name, self.tolerance);
        let pass = match self.comparison {
            Comparison::AtMost => measured <= tol,
            Comparison::AtLeast => measured >= tol,
        };
        Ok(CheckOutcome { measured, pass })
    }
}

const fn at_most(name: &'static str, tolerance: f64, run: CheckFn) -> Check {
    Check { name, tolerance, comparison: Comparison::AtMost, run }
}

const fn at_least(name: &'static str, tolerance: f64, run: CheckFn) -> Check {
    Check { name, tolerance, comparison: Comparison::AtLeast, run }
}

pub static CHECKS: &[Check] = &[
    at_most("measures.circle_measure_valid", COUNT_TOL, measures_circle_measure_valid),
    at_most("measures.real_atomic_valid", COUNT_TOL, measures_real_atomic_valid),
    at_most("measures.profile_accounting", 1e-9, measures_profile_accounting),
    at_most("measures.mass_additive_homogeneous", 1e-12, measures_mass_additive),
    at_most("measures.moment_zero_is_mass", 1e-12, measures_moment_zero),
    at_most("measures.moment_bounded", 1e-12, measures_moment_bounded),
    at_most("transforms.pick_property", 1e-12, transforms_pick),
    at_most("transforms.schur_property", 1e-12, transforms_schur),
    at_most("transforms.inversion_residual", 1e-14, transforms_inversion_residual),
    at_most("transforms.inversion_identity", 1e-10, transforms_inversion_identity),
    at_most("transforms.phi_hook", 1e-10, transforms_phi_hook),
    at_least("transforms.recovery_mass", 0.98, transforms_recovery_mass),
    at_most("class_l.equivariance_pick", 1e-12, class_l_equivariance),
    at_most("class_l.f_maps_disk_to_upper", 1e-12, class_l_f_disk),
    at_most("class_l.membership", COUNT_TOL, class_l_membership),
    at_most("class_l.root_residual", 1e-10, class_l_root_residual),
    at_most("class_l.weight_vs_residue", 1e-6, class_l_weight_residue),
    at_most("class_l.one_root_per_class", COUNT_TOL, class_l_one_root),
    at_most("class_l.density_nonnegative", 1e-12, class_l_density_nonnegative),
    at_most("class_l.mass_convergence", 1e-2, class_l_mass_convergence),
    at_most("wrapping.boolean_id_valid", 1e-12, wrapping_boolean_id_valid),
    at_most("wrapping.functional_identity", 1e-12, wrapping_functional_identity),
    at_most("wrapping.direct_vs_recovered", 1e-5, wrapping_direct_vs_recovered),
    at_most("wrapping.weight_preservation", 1e-6, wrapping_weight_preservation),
    at_most("wrapping.weak_continuity", 0.1, wrapping_weak_continuity),
    at_most("convolutions.closed_form_agreement", 1e-10, conv_closed_form),
    at_most("convolutions.phi_additivity", 1e-8, conv_phi_additivity),
    at_most("convolutions.free_power_phi", 1e-8, conv_free_power_phi),
    at_most("convolutions.homomorphism_boolean", 1e-12, conv_hom_boolean),
    at_most("convolutions.homomorphism_monotone", 1e-12, conv_hom_monotone),
    at_most("convolutions.homomorphism_free", 1e-6, conv_hom_free),
    at_most("convolutions.free_boolean_identity", 1e-6, conv_free_boolean_identity),
    at_most("convolutions.commutation", 1e-6, conv_commutation),
    at_most("convolutions.power_atom_rule", 1e-4, conv_power_atom_rule),
    at_most("levy.pair_weights", COUNT_TOL, levy_pair_weights),
    at_most("levy.generator_properties", 1e-12, levy_generator_properties),
    at_most("levy.bp_intertwining", 1e-6, levy_bp_intertwining),
    at_most("levy.bp_classical", 1e-8, levy_bp_classical),
    at_most("levy.generator_periodicity", 1e-12, levy_generator_periodicity),
    at_most("levy.ode_semigroup", 1e-7, levy_ode_semigroup),
    at_most("levy.bp_sigma_mass", 1e-12, levy_bp_sigma_mass),
    at_most("harness.config_valid", COUNT_TOL, harness_config_valid),
    at_most("harness.report_aggregate", COUNT_TOL, harness_report_aggregate),
    at_most("harness.determinism", COUNT_TOL, harness_determinism),
    at_most("harness.generator_validity", COUNT_TOL, harness_generator_validity),
    at_most("limit.boolean_row_product", 1e-12, limit_boolean_row_product),
    at_most("limit.free_distance", 1e-2, limit_free_distance),
    at_most("limit.free_trend_violations", COUNT_TOL, limit_free_trend),
    at_most("limit.infinitesimal_growth", super::INFINITESIMAL_NOISE, limit_infinitesimal_growth),
    at_most("limit.infinitesimal_mass", 1e-3, limit_infinitesimal_mass),
    at_most("acceptance.ac01_wrapped_cauchy", 1.0, ac01),
    at_most("acceptance.ac02_z_plus_i", 1.0, ac02),
    at_most("acceptance.ac03_atoms", 1.0, ac03),
    at_most("acceptance.ac04_homomorphism", 1.0, ac04),
    at_most("acceptance.ac05_counterexample", 1.0, ac05),
    at_most("acceptance.ac06_bercovici_pata", 1.0, ac06),
    at_most("acceptance.ac07_free_gaussian_preimage", 1.0, ac07),
    at_most("acceptance.ac08_monotone_ode", 1.0, ac08),
    at_most("acceptance.ac09_belinschi_nica", 1.0, ac09),
    at_most("acceptance.ac10_limit", 1.0, ac10),
    at_most("acceptance.ac11_identities", 1.0, ac11),
    at_most("acceptance.ac12_power_atom", 1.0, ac12),
];

pub fn check_names() -> Vec<&'static str> {
    CHECKS.iter().map(|c| c.name).collect()
}

pub fn find_check(name: &str) -> Option<&'static Check> {
    CHECKS.iter().find(|c| c.name == name)
}

fn rng(config: &SuiteConfig, salt: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(config.seed.wrapping_mul(0x9e37_79b9_7f4a_7c15) ^ salt)
}

fn upper_samples(rng: &mut ChaCha8Rng, n: usize) -> Vec<C> {
    (0..n).map(|_| C::new(rng.gen_range(-PI..PI), rng.gen_range(0.05..3.0))).collect()
}

fn disk_samples(rng: &mut ChaCha8Rng, n: usize, radius: f64) -> Vec<C> {
    (0..n).map(|_| C::from_polar(radius * rng.gen::<f64>().sqrt(), rng.gen_range(0.0..TAU))).collect()
}

fn random_sigma(rng: &mut ChaCha8Rng) -> Result<CircleMeasure> {
    let atoms = (0..rng.gen_range(0..=3))
        .map(|_| CircleAtom { theta: rng.gen_range(0.0..TAU), mass: rng.gen_range(0.0..1.0) })
        .collect();
    let c0: f64 = rng.gen_range(0.0..1.0);
    let c1 = C::from_polar(0.25 * c0 * rng.gen::<f64>(), rng.gen_range(0.0..TAU));
    let c2 = C::from_polar(0.2 * c0 * rng.gen::<f64>(), rng.gen_range(0.0..TAU));
    CircleMeasure::new(atoms, FourierDensity { c0, cn: vec![c1, c2] })
}

fn descriptor_seed(config: &SuiteConfig, k: usize) -> u64 {
    config.seed.wrapping_mul(1000).wrapping_add(k as u64)
}

/// `config.samples` random descriptors with a Haar part.
fn descriptors(config: &SuiteConfig) -> Result<Vec<ClassLDescriptor>> {
    (0..config.samples)
        .map(|k| gen_random_descriptor(descriptor_seed(config, k), k % 4, 0.2 + 0.6 * (k % 5) as f64 / 4.0))
        .collect()
}

/// `config.samples` random purely atomic descriptors.
fn atomic_descriptors(config: &SuiteConfig) -> Result<Vec<ClassLDescriptor>> {
    (0..config.samples)
        .map(|k| gen_random_descriptor(descriptor_seed(config, 500 + k), 1 + k % 3, 0.0))
        .collect()
}

fn count(flags: impl IntoIterator<Item = bool>) -> f64 {
    flags.into_iter().filter(|&bad| bad).count() as f64
}

fn max_of(v: impl IntoIterator<Item = f64>) -> f64 {
    v.into_iter().fold(0.0, |a, b| if b.is_nan() { f64::NAN } else { a.max(b) })
}

/// Worst ratio of error to threshold; a `(value, bound)` in `lower` must exceed `bound`.
fn ratio(upper: &[(f64, f64)], lower: &[(f64, f64)]) -> f64 {
    let up = upper.iter().map(|&(v, tol)| v / tol);
    let lo = lower.iter().map(|&(v, bound)| if v > 0.0 { bound / v } else { f64::INFINITY });
    max_of(up.chain(lo))
}

fn measures_circle_measure_valid(config: &SuiteConfig) -> Result<f64> {
    let mut r = rng(config, 1);
    let grid = angle_grid(POSITIVITY_GRID);
    let mut bad = 0.0;
    for _ in 0..config.samples {
        let s = random_sigma(&mut r)?;
        let atoms_ok = s.atoms().iter().all(|a| a.mass >= 0.0 && (0.0..TAU).contains(&a.theta));
        let distinct = s.atoms().windows(2).all(|p| p[0].theta != p[1].theta);
        let positive = grid.iter().all(|&th| s.density_at(th) >= 0.0);
        let mass = s.total_mass();
        bad += count([!atoms_ok, !distinct, !positive, !(mass.is_finite() && mass >= 0.0)]);
    }
    let rejects = [
        CircleMeasure::from_atoms(&[(0.0, -0.1)]).is_err(),
        CircleMeasure::from_fourier(0.1, vec![C::new(0.5, 0.0)]).is_err(),
        CircleMeasure::from_fourier(-1.0, Vec::new()).is_err(),
    ];
    Ok(bad + count(rejects.map(|ok| !ok)))
}

fn measures_real_atomic_valid(_: &SuiteConfig) -> Result<f64> {
    let rejects = [
        RealAtomicMeasure::from_pairs(&[(0.0, 0.6), (1.0, 0.6)]).is_err(),
        RealAtomicMeasure::from_pairs(&[(0.0, 0.2), (0.0, 0.2)]).is_err(),
        RealAtomicMeasure::from_pairs(&[(0.0, -0.2)]).is_err(),
        RealAtomicMeasure::from_pairs(&[(0.0, 0.5), (1.0, 0.5)]).is_ok(),
    ];
    Ok(count(rejects.map(|ok| !ok)))
}

fn accounting_error(p: &MeasureProfile) -> f64 {
    let negative = p.density_grid.iter().any(|g| g.density < 0.0);
    if negative || p.captured_mass > 1.0 + 1e-6 {
        return f64::INFINITY;
    }
    (p.captured_mass - p.atom_mass() - p.density_mass()).abs()
}

fn measures_profile_accounting(config: &SuiteConfig) -> Result<f64> {
    let mut worst: f64 = 0.0;
    let angles = angle_grid(512);
    let line = linspace(-20.0, 20.0, 801);
    for d in descriptors(config)?.iter().take(3) {
        worst = worst.max(accounting_error(&recover_circle(&wrap_descriptor(d).to_handle(), &angles, &DEFAULT_LADDER)?));
        worst = worst.max(accounting_error(&recover_line(&classl_f(d), &line, &DEFAULT_LADDER)?));
    }
    Ok(worst)
}

fn measures_mass_additive(config: &SuiteConfig) -> Result<f64> {
    let mut r = rng(config, 2);
    let mut worst: f64 = 0.0;
    for _ in 0..config.samples {
        let (a, b) = (random_sigma(&mut r)?, random_sigma(&mut r)?);
        let t = r.gen_range(0.0..3.0);
        worst = worst.max((circle_measure_add(&a, &b).total_mass() - a.total_mass() - b.total_mass()).abs());
        worst = worst.max((circle_measure_scale(&a, t)?.total_mass() - t * a.total_mass()).abs());
    }
    Ok(worst)
}

fn measures_moment_zero(config: &SuiteConfig) -> Result<f64> {
    let mut r = rng(config, 3);
    let mut worst: f64 = 0.0;
    for _ in 0..config.samples {
        let s = random_sigma(&mut r)?;
        worst = worst.max((fourier_moment(&s, 0) - s.total_mass()).norm());
    }
    Ok(worst)
}

fn measures_moment_bounded(config: &SuiteConfig) -> Result<f64> {
    let mut r = rng(config, 4);
    let mut worst: f64 = 0.0;
    for _ in 0..config.samples {
        let s = random_sigma(&mut r)?;
        for n in 0..=16 {
            worst = worst.max(fourier_moment(&s, n).norm() - s.total_mass());
        }
    }
    Ok(worst)
}

fn transforms_pick(config: &SuiteConfig) -> Result<f64> {
    let mut r = rng(config, 5);
    let zs = upper_samples(&mut r, 1000);
    let ds = descriptors(config)?;
    let mut worst: f64 = 0.0;
    for d in ds.iter().take(3) {
        worst = worst.max(self_map_violation(&classl_f(d), &zs)?);
    }
    let (f1, f2) = (classl_f(&ds[0]), classl_f(&ds[ds.len() - 1]));
    worst = worst.max(self_map_violation(&free_add(&f1, &f2)?.handle, &zs)?);
    worst = worst.max(self_map_violation(&monotone_compose(&f1, &f2)?, &zs)?);
    Ok(worst)
}

fn transforms_schur(config: &SuiteConfig) -> Result<f64> {
    let mut r = rng(config, 6);
    let ws = disk_samples(&mut r, 1000, 0.95);
    let bs: Vec<BooleanIDDescriptor> = descriptors(config)?.iter().map(wrap_descriptor).collect();
    let mut worst: f64 = 0.0;
    for b in bs.iter().take(3) {
        worst = worst.max(self_map_violation(&b.to_handle(), &ws)?);
    }
    worst = worst.max(self_map_violation(&mult_free(&bs[0], &bs[bs.len() - 1])?.handle, &ws)?);
    Ok(worst)
}

/// Inversion targets for `F` (in the upper half plane) and `η` (in the disk).
fn inversion_cases(config: &SuiteConfig) -> Result<Vec<(TransformHandle, C)>> {
    let mut r = rng(config, 7);
    let mut cases = Vec::new();
    for d in descriptors(config)?.iter().take(4) {
        for z in upper_samples(&mut r, 5) {
            cases.push((classl_f(d), z + C::new(0.0, 1.0)));
        }
        for w in disk_samples(&mut r, 5, 0.5) {
            cases.push((wrap_descriptor(d).to_handle(), w));
        }
    }
    Ok(cases)
}

fn transforms_inversion_residual(config: &SuiteConfig) -> Result<f64> {
    let mut worst: f64 = 0.0;
    for (t, target) in inversion_cases(config)? {
        let res = invert_continued(&t, target)?;
        let actual = (t.eval(res.preimage)? - target).norm();
        if res.residual > default_tol(target) {
            return Ok(f64::INFINITY);
        }
        worst = worst.max((actual - res.residual).abs());
    }
    Ok(worst)
}

fn transforms_inversion_identity(config: &SuiteConfig) -> Result<f64> {
    let mut worst: f64 = 0.0;
    for (t, target) in inversion_cases(config)? {
        let res = invert_continued(&t, target)?;
        worst = worst.max((t.eval(res.preimage)? - target).norm() / target.norm().max(1.0));
    }
    Ok(worst)
}

fn transforms_phi_hook(config: &SuiteConfig) -> Result<f64> {
    let mut r = rng(config, 8);
    let mut worst: f64 = 0.0;
    for z in upper_samples(&mut r, 20) {
        let z = z + C::new(0.0, 8.0);
        let cauchy = classl_f(&ClassLDescriptor::cauchy(0.7)?);
        worst = worst.max((phi_eval(&cauchy, z)? - C::new(0.0, -0.7)).norm());
        let point = classl_f(&ClassLDescriptor::point_mass(1.3));
        worst = worst.max((phi_eval(&point, z)? - 1.3).norm());
    }
    Ok(worst)
}

fn transforms_recovery_mass(_: &SuiteConfig) -> Result<f64> {
    let line = linspace(-200.0, 200.0, 40_001);
    let angles = angle_grid(2048);
    let profiles = [
        recover_line(&classl_f(&ClassLDescriptor::cauchy(1.0)?), &line, &DEFAULT_LADDER)?,
        recover_line(&TransformHandle::f_closed(|z| z - 1.0 / z), &line, &DEFAULT_LADDER)?,
        recover_circle(&TransformHandle::eta_closed(|z| (-1.0f64).exp() * z), &angles, &DEFAULT_LADDER)?,
        recover_circle(&BooleanIDDescriptor::point_mass(C::from_polar(1.0, 0.4))?.to_handle(), &angles, &DEFAULT_LADDER)?,
    ];
    if profiles.iter().any(|p| p.captured_mass > 1.0 + 1e-6) {
        return Ok(f64::NEG_INFINITY);
    }
    Ok(profiles.iter().map(|p| p.captured_mass).fold(f64::INFINITY, f64::min))
}

fn class_l_equivariance(config: &SuiteConfig) -> Result<f64> {
    let mut r = rng(config, 9);
    let zs = upper_samples(&mut r, 200);
    let mut worst: f64 = 0.0;
    for d in descriptors(config)?.iter().chain(&atomic_descriptors(config)?) {
        let m = membership_check(&classl_f(d), &zs)?;
        worst = worst.max(m.deviation / (1.0 + d.beta.abs())).max(m.pick_violation);
    }
    Ok(worst)
}

fn class_l_f_disk(config: &SuiteConfig) -> Result<f64> {
    let mut r = rng(config, 10);
    let ws = disk_samples(&mut r, 500, 0.98);
    let mut worst: f64 = 0.0;
    for d in descriptors(config)?.iter().chain(&atomic_descriptors(config)?) {
        for &w in &ws {
            worst = worst.max(-d.f_disk(w).im);
        }
    }
    Ok(worst)
}

fn class_l_membership(config: &SuiteConfig) -> Result<f64> {
    let mut r = rng(config, 11);
    let zs = upper_samples(&mut r, 100);
    let ds = descriptors(config)?;
    let mut built: Vec<ClassLDescriptor> = ds.clone();
    built.extend(atomic_descriptors(config)?);
    built.extend(ds.iter().map(|d| shift(d, 3)));
    built.extend(ds.windows(2).map(|p| boolean_add(&p[0], &p[1])));
    built.extend(ds.iter().map(|d| unwrap_descriptor(&wrap_descriptor(d), branch_index(d))));
    let mut bad = 0.0;
    for d in &built {
        bad += count([!membership_check(&classl_f(d), &zs)?.member]);
    }
    Ok(bad)
}

fn class_l_root_residual(config: &SuiteConfig) -> Result<f64> {
    let mut worst: f64 = 0.0;
    for d in atomic_descriptors(config)? {
        let sol = solve_atoms(&d, config.atom_window)?;
        worst = worst.max(max_of(sol.roots.iter().map(|r| atom_root_residual(&d, r).abs())));
    }
    Ok(worst)
}

/// Fine ladder for the residue `lim iy/F(x + iy)` at solver roots.
const ROOT_LADDER: [f64; 3] = [1e-4, 1e-5, 1e-6];

fn class_l_weight_residue(config: &SuiteConfig) -> Result<f64> {
    let mut worst: f64 = 0.0;
    for d in atomic_descriptors(config)? {
        let sol = solve_atoms(&d, config.atom_window)?;
        let f = classl_f(&d);
        for r in &sol.roots {
            worst = worst.max((line_atom_weight(&f, r.x, &ROOT_LADDER)?.re - r.weight).abs());
        }
    }
    Ok(worst)
}

fn class_l_one_root(config: &SuiteConfig) -> Result<f64> {
    let mut bad = 0.0;
    for d in atomic_descriptors(config)? {
        let sol = solve_atoms(&d, config.atom_window)?;
        let mut intervals: Vec<i64> = sol.roots.iter().map(|r| r.interval).collect();
        intervals.sort_unstable();
        bad += count(intervals.windows(2).map(|p| p[0] == p[1]));
        let mut classes: Vec<f64> = sol.roots.iter().map(|r| r.x.rem_euclid(TAU)).collect();
        classes.sort_by(f64::total_cmp);
        bad += count(classes.windows(2).map(|p| p[1] - p[0] < 1e-9));
    }
    Ok(bad)
}

fn class_l_density_nonnegative(config: &SuiteConfig) -> Result<f64> {
    let grid = linspace(-20.0 * PI, 20.0 * PI, config.grid_size);
    let mut worst: f64 = 0.0;
    for d in descriptors(config)?.iter().chain([&z_plus_i_example()]) {
        for &x in &grid {
            let f = d.f_disk(C::from_polar(1.0, x));
            worst = worst.max(-f.im / (PI * ((x + f.re).powi(2) + f.im * f.im)));
        }
        if classl_density(d, &grid).density_grid.iter().any(|g| g.density < 0.0) {
            return Ok(f64::INFINITY);
        }
    }
    Ok(worst.max(0.0) + 0.0)
}

/// Mass deficit at the largest window, provided it shrinks as the window grows.
fn class_l_mass_convergence(config: &SuiteConfig) -> Result<f64> {
    let d = z_plus_i_example();
    let deficit = |k: f64| {
        let reach = TAU * k;
        let n = (reach * 200.0) as usize + 1;
        1.0 - classl_density(&d, &linspace(-reach, reach, n)).captured_mass
    };
    let (coarse, fine) = (deficit(25.0), deficit(50.0));
    let atomic = ClassLDescriptor::new(0.0, CircleMeasure::point(0.0, 1.0)?)?;
    let (small, large) = (
        1.0 - solve_atoms(&atomic, config.atom_window / 4)?.captured_mass,
        1.0 - solve_atoms(&atomic, config.atom_window)?.captured_mass,
    );
    if !(fine < coarse && large < small) || fine < -1e-6 || large < -1e-6 {
        return Ok(f64::INFINITY);
    }
    Ok(fine.max(large))
}

fn wrapping_boolean_id_valid(config: &SuiteConfig) -> Result<f64> {
    let mut r = rng(config, 12);
    let ws = disk_samples(&mut r, 200, 0.95);
    let mut worst: f64 = 0.0;
    for d in descriptors(config)? {
        let b = wrap_descriptor(&d);
        let eta = b.to_handle();
        let m0 = b.sigma.total_mass();
        worst = worst.max((b.gamma.norm() - 1.0).abs());
        worst = worst.max(eta.eval(C::new(0.0, 0.0))?.norm());
        worst = worst.max((eta.derivative(C::new(0.0, 0.0))? - b.gamma * (-m0).exp()).norm());
        if ws.iter().any(|&w| b.eta_eval(w).norm() == 0.0) {
            return Ok(f64::INFINITY);
        }
    }
    Ok(worst)
}

fn wrapping_functional_identity(config: &SuiteConfig) -> Result<f64> {
    let mut r = rng(config, 13);
    let zs = upper_samples(&mut r, 1000);
    let mut worst: f64 = 0.0;
    for d in descriptors(config)?.iter().chain(&atomic_descriptors(config)?) {
        let (f, b) = (classl_f(d), wrap_descriptor(d));
        for &z in &zs {
            worst = worst.max(((C::i() * f.eval(z)?).exp() - b.eta_eval((C::i() * z).exp())).norm());
        }
    }
    Ok(worst)
}

fn wrapping_direct_vs_recovered(_: &SuiteConfig) -> Result<f64> {
    let sigma = CircleMeasure::from_fourier(0.6, vec![C::new(0.1, 0.2), C::new(-0.05, 0.0)])?;
    let mut worst: f64 = 0.0;
    for d in [ClassLDescriptor::new(0.3, sigma)?, z_plus_i_example()] {
        let n = 256usize;
        let angles = angle_grid(n);
        let reach = 65 * n as i64;
        let line: Vec<f64> = (-reach..=reach).map(|j| TAU * j as f64 / n as f64).collect();
        let line_profile = recover_line(&classl_f(&d), &line, &DEFAULT_LADDER)?;
        let direct = wrap_direct(&line_profile, &angles, Some(64))?;
        let circle = recover_circle(&wrap_descriptor(&d).to_handle(), &angles, &DEFAULT_LADDER)?;
        for (a, b) in direct.density_grid.iter().zip(&circle.density_grid) {
            worst = worst.max((a.density - b.density).abs());
        }
    }
    Ok(worst)
}

fn wrapping_weight_preservation(config: &SuiteConfig) -> Result<f64> {
    let mut worst: f64 = 0.0;
    let mut list = vec![ClassLDescriptor::new(0.0, CircleMeasure::point(0.0, 1.0)?)?];
    list.extend(atomic_descriptors(config)?.into_iter().take(3));
    for d in list {
        for p in atom_correspondence(&d, config.atom_window)? {
            worst = worst.max((p.line_weight - p.circle_weight).abs());
        }
    }
    Ok(worst)
}

/// Deviation from linear response: `|L(10⁻⁴)/L(10⁻³) − 1|`, where `L(ε)` is the
/// largest change of the first 16 wrapped Fourier moments divided by `ε`.
fn wrapping_weak_continuity(config: &SuiteConfig) -> Result<f64> {
    let d = gen_random_descriptor(descriptor_seed(config, 900), 2, 0.4)?;
    let base = fourier_moments(&wrap_descriptor(&d).to_handle(), 16)?;
    let response = |eps: f64| -> Result<f64> {
        let bumped = circle_measure_add(&d.sigma, &CircleMeasure::point(0.5, eps)?);
        let moved = ClassLDescriptor::new(d.beta + eps, bumped)?;
        let m = fourier_moments(&wrap_descriptor(&moved).to_handle(), 16)?;
        Ok(max_of(m.iter().zip(&base).map(|(a, b)| (a - b).norm())) / eps)
    };
    Ok((response(1e-4)? / response(1e-3)? - 1.0).abs())
}

fn eta_gap(a: &TransformHandle, b: &TransformHandle, ws: &[C]) -> Result<f64> {
    let mut worst: f64 = 0.0;
    for &w in ws {
        worst = worst.max((a.eval(w)? - b.eval(w)?).norm());
    }
    Ok(worst)
}

fn conv_closed_form(config: &SuiteConfig) -> Result<f64> {
    let mut r = rng(config, 14);
    let ws = disk_samples(&mut r, 50, 0.9);
    let b1 = wrap_descriptor(&ClassLDescriptor::new(0.4, CircleMeasure::haar(0.3)?)?);
    let b2 = wrap_descriptor(&ClassLDescriptor::new(-1.1, CircleMeasure::haar(0.8)?)?);
    let b3 = wrap_descriptor(&gen_random_descriptor(descriptor_seed(config, 901), 2, 0.3)?);
    let results = [
        mult_free(&b1, &b2)?,
        mult_free_power(&b1, 2.5, 0)?,
        mult_free_power(&b2, 1.5, 0)?,
        belinschi_nica_circle(&b1, 0.7, 0)?,
        belinschi_nica_circle(&b3, 0.0, 0)?,
    ];
    let mut worst: f64 = 0.0;
    for res in &results {
        let exact = match &res.closed_form {
            Some(ClosedForm::BooleanId(b)) => b.to_handle(),
            Some(ClosedForm::ClassL(d)) => wrap_descriptor(d).to_handle(),
            None => return Err(Error::Inconsistency("closed form expected".into())),
        };
        worst = worst.max(eta_gap(&exact, &res.handle, &ws)?);
    }
    Ok(worst)
}

fn high_samples(config: &SuiteConfig, salt: u64) -> Vec<C> {
    let mut r = rng(config, salt);
    upper_samples(&mut r, 20).into_iter().map(|z| z + C::new(0.0, 8.0)).collect()
}

fn conv_phi_additivity(config: &SuiteConfig) -> Result<f64> {
    let zs = high_samples(config, 15);
    let ds = descriptors(config)?;
    let mut worst: f64 = 0.0;
    for p in ds.windows(2).take(3) {
        let (f1, f2) = (classl_f(&p[0]), classl_f(&p[1]));
        let sum = free_add(&f1, &f2)?.handle;
        for &z in &zs {
            worst = worst.max((phi_eval(&sum, z)? - phi_eval(&f1, z)? - phi_eval(&f2, z)?).norm());
        }
    }
    Ok(worst)
}

fn conv_free_power_phi(config: &SuiteConfig) -> Result<f64> {
    let zs = high_samples(config, 16);
    let mut worst: f64 = 0.0;
    for d in descriptors(config)?.iter().take(2) {
        let f = classl_f(d);
        for t in [0.5, 1.5, 2.5] {
            let ft = free_power(&f, t)?.handle;
            for &z in &zs {
                worst = worst.max((phi_eval(&ft, z)? - t * phi_eval(&f, z)?).norm());
            }
        }
    }
    Ok(worst)
}

#[derive(Clone, Copy)]
enum Op {
    Boolean,
    Monotone,
    Free,
}

/// Largest `|exp(iF_∘(z)) − η_∘(e^{iz})|` over `pairs` random pairs at 100 points.
fn homomorphism(config: &SuiteConfig, op: Op, pairs: usize) -> Result<f64> {
    let mut r = rng(config, 17);
    let zs = upper_samples(&mut r, 100);
    let mut worst: f64 = 0.0;
    for k in 0..pairs as u64 {
        let s = descriptor_seed(config, 2000 + 2 * k as usize);
        let d1 = gen_random_descriptor(s, (k % 3) as usize, 0.3 + 0.02 * (k % 25) as f64)?;
        let d2 = gen_random_descriptor(s + 1, ((k + 1) % 3) as usize, 0.5)?;
        let (f1, f2) = (classl_f(&d1), classl_f(&d2));
        let (e1, e2) = (wrap_descriptor(&d1).to_handle(), wrap_descriptor(&d2).to_handle());
        let (f, e) = match op {
            Op::Boolean => (boolean_add_handles(&f1, &f2)?, mult_boolean_handles(&e1, &e2)?),
            Op::Monotone => (monotone_compose(&f1, &f2)?, monotone_compose(&e1, &e2)?),
            Op::Free => {
                let b = (wrap_descriptor(&d1), wrap_descriptor(&d2));
                (free_add(&f1, &f2)?.handle, mult_free(&b.0, &b.1)?.handle)
            }
        };
        for &z in &zs {
            worst = worst.max(((C::i() * f.eval(z)?).exp() - e.eval((C::i() * z).exp())?).norm());
        }
    }
    Ok(worst)
}

fn conv_hom_boolean(config: &SuiteConfig) -> Result<f64> {
    homomorphism(config, Op::Boolean, config.samples)
}

fn conv_hom_monotone(config: &SuiteConfig) -> Result<f64> {
    homomorphism(config, Op::Monotone, config.samples)
}

fn conv_hom_free(config: &SuiteConfig) -> Result<f64> {
    homomorphism(config, Op::Free, config.samples)
}

/// η-samples for the identities. For `t < 1` the map `z ↦ tz + (1 − t)F(z)` need
/// not be injective on all of `ℂ⁺`, so the samples stay in `|w| ≤ 0.3`.
fn identity_samples(config: &SuiteConfig) -> Vec<C> {
    let mut r = rng(config, 18);
    disk_samples(&mut r, 12, 0.3)
}

fn conv_free_boolean_identity(config: &SuiteConfig) -> Result<f64> {
    let ws = identity_samples(config);
    let mut worst: f64 = 0.0;
    for k in 0..3 {
        let b = wrap_descriptor(&gen_random_descriptor(descriptor_seed(config, 100 + k), 1, 0.4)?);
        for t in [0.25, 0.5, 0.75] {
            let free_t = mult_free_power(&b, t, 0)?.handle;
            let bool_t = mult_boolean_power(&b, 1.0 - t, 0)?.to_handle();
            worst = worst.max(eta_gap(&monotone_compose(&free_t, &bool_t)?, &b.to_handle(), &ws)?);
        }
    }
    Ok(worst)
}

/// `(ν^{⊠p})^{⊎×q}` against `(ν^{⊎×q'})^{⊠p'}` on one lift, `p = 2`, `q = 0.75`.
fn conv_commutation(config: &SuiteConfig) -> Result<f64> {
    let ws = identity_samples(config);
    let (p, q) = (2.0, 0.75);
    let q2 = 1.0 - p + p * q;
    let p2 = p * q / q2;
    let mut worst: f64 = 0.0;
    for k in 0..3 {
        let f = classl_f(&gen_random_descriptor(descriptor_seed(config, 100 + k), 1, 0.4)?);
        let lhs = wrap_handle(&boolean_power_handle(&free_power(&f, p)?.handle, q)?)?;
        let rhs = wrap_handle(&free_power(&boolean_power_handle(&f, q2)?, p2)?.handle)?;
        worst = worst.max(eta_gap(&lhs, &rhs, &ws)?);
    }
    Ok(worst)
}

/// Base atom weight and `t`-power atom weight for `(β = π, σ = ½δ₁)`, `t = 1.5`.
fn power_atom_weights() -> Result<(f64, f64)> {
    let d = ClassLDescriptor::new(PI, CircleMeasure::point(0.0, 0.5)?)?;
    let b = wrap_descriptor(&d);
    let t = 1.5;
    let eta = mult_free_power(&b, t, 1)?.handle;
    let theta = (-t * PI).rem_euclid(TAU);
    let w = circle_atom_weight(&b.to_handle(), PI, &DEFAULT_LADDER)?.re;
    let wt = circle_atom_weight(&eta, theta, &DEFAULT_LADDER)?.re;
    Ok((w, wt))
}

fn conv_power_atom_rule(_: &SuiteConfig) -> Result<f64> {
    let t = 1.5;
    let (w, wt) = power_atom_weights()?;
    Ok((wt - (t * w - (t - 1.0))).abs())
}

fn levy_pair_weights(config: &SuiteConfig) -> Result<f64> {
    let mut r = rng(config, 19);
    let mut bad = count([RealAtomicMeasure::from_pairs(&[(0.5, -0.1)]).is_ok()]);
    for pair in periodized_pairs()?.iter().chain(&literal_pairs()?) {
        bad += count(pair.tau.atoms().iter().map(|a| a.w < 0.0));
    }
    for _ in 0..config.samples {
        let tau = RealAtomicMeasure::from_pairs(&[(r.gen_range(-3.0..3.0), r.gen_range(0.0..0.5))])?;
        bad += count(CanonicalPairR::new(r.gen_range(-1.0..1.0), tau).tau.atoms().iter().map(|a| a.w < 0.0));
    }
    Ok(bad)
}

fn literal_pairs() -> Result<Vec<CanonicalPairR>> {
    let taus: [&[(f64, f64)]; 3] = [&[(0.0, 1.0)], &[(0.0, 0.5), (1.0, 0.25)], &[(PI, 1.0)]];
    taus.iter().map(|t| Ok(CanonicalPairR::new(0.0, RealAtomicMeasure::from_pairs(t)?))).collect()
}

fn periodized_pairs() -> Result<Vec<CanonicalPairR>> {
    let taus: [(f64, &[(f64, f64)]); 3] = [(0.0, &[(0.0, 1.0)]), (0.3, &[(0.0, 0.5), (1.0, 0.25)]), (-0.2, &[(PI, 0.4)])];
    taus.iter().map(|(a, t)| Ok(CanonicalPairR::periodized(*a, RealAtomicMeasure::from_pairs(t)?))).collect()
}

fn levy_generator_properties(config: &SuiteConfig) -> Result<f64> {
    let mut r = rng(config, 20);
    let zs = upper_samples(&mut r, 200);
    let ws = disk_samples(&mut r, 200, 0.95);
    let mut worst: f64 = 0.0;
    let mut additive: Vec<GeneratorHandle> = literal_pairs()?.iter().map(GeneratorHandle::additive).collect();
    let mut multiplicative = Vec::new();
    for d in descriptors(config)?.iter().take(3) {
        additive.push(GeneratorHandle::additive_from_circle(d.beta, &d.sigma));
        multiplicative.push(GeneratorHandle::multiplicative(d.beta, &d.sigma));
    }
    for g in &additive {
        worst = worst.max(max_of(zs.iter().map(|&z| -g.eval(z).im)));
    }
    for g in &multiplicative {
        worst = worst.max(max_of(ws.iter().map(|&w| (g.eval(w) / w).re)));
    }
    Ok(worst)
}

fn levy_bp_intertwining(config: &SuiteConfig) -> Result<f64> {
    let mut r = rng(config, 21);
    let ws = disk_samples(&mut r, 12, 0.6);
    let mut worst: f64 = 0.0;
    for pair in periodized_pairs()? {
        let image = bp_pair_map(&pair)?;
        for kind in [IdKind::Boolean, IdKind::Free, IdKind::Monotone] {
            let f = match build_additive_id(kind, &pair) {
                AdditiveBuild::Transform(h) => h,
                AdditiveBuild::Characteristic(_) => unreachable!("transform kinds"),
            };
            let eta = build_mult_id(kind, &image).eta().expect("η-transform kinds");
            worst = worst.max(eta_gap(&wrap_handle(&f)?, &eta, &ws)?);
        }
    }
    Ok(worst)
}

fn classical_gap(pair: &CanonicalPairR) -> Result<f64> {
    let image = bp_pair_map(pair)?;
    let char_fn = match build_additive_id(IdKind::Classical, pair) {
        AdditiveBuild::Characteristic(c) => c,
        AdditiveBuild::Transform(_) => unreachable!("classical kind"),
    };
    let series = FourierSeries { gamma: image.gamma, sigma: image.sigma };
    Ok(max_of((-32i64..=32).map(|p| (char_fn.wrapped_coefficient(p) - series.coefficient(p)).norm())))
}

fn levy_bp_classical(_: &SuiteConfig) -> Result<f64> {
    Ok(max_of(literal_pairs()?.iter().map(classical_gap).collect::<Result<Vec<_>>>()?))
}

fn levy_generator_periodicity(config: &SuiteConfig) -> Result<f64> {
    let mut r = rng(config, 22);
    let zs = upper_samples(&mut r, 200);
    let mut worst: f64 = 0.0;
    for d in descriptors(config)? {
        let g = GeneratorHandle::additive_from_circle(d.beta, &d.sigma);
        worst = worst.max(max_of(zs.iter().map(|&z| (g.eval(z + TAU) - g.eval(z)).norm())));
    }
    for pair in periodized_pairs()? {
        let g = GeneratorHandle::additive(&pair);
        worst = worst.max(max_of(zs.iter().map(|&z| (g.eval(z + TAU) - g.eval(z)).norm())));
    }
    Ok(worst)
}

fn levy_ode_semigroup(config: &SuiteConfig) -> Result<f64> {
    let mut r = rng(config, 23);
    let ws = disk_samples(&mut r, 10, 0.9);
    let zs: Vec<C> = upper_samples(&mut r, 10).into_iter().map(|z| z + C::new(0.0, 0.5)).collect();
    let d = gen_random_descriptor(descriptor_seed(config, 902), 2, 0.3)?;
    let gens = [
        (GeneratorHandle::multiplicative(d.beta, &d.sigma), &ws),
        (GeneratorHandle::additive_from_circle(d.beta, &d.sigma), &zs),
    ];
    let mut worst: f64 = 0.0;
    for (g, pts) in gens {
        for (t, s) in [(0.3, 0.7), (0.7, 0.3), (0.3, 0.3), (0.7, 0.7)] {
            let ht = monotone_flow_handle(g.clone(), t, ODE_STEP);
            let hs = monotone_flow_handle(g.clone(), s, ODE_STEP);
            let hts = monotone_flow_handle(g.clone(), t + s, ODE_STEP);
            for &z in pts.iter() {
                worst = worst.max((ht.eval(hs.eval(z)?)? - hts.eval(z)?).norm());
            }
        }
    }
    Ok(worst)
}

fn levy_bp_sigma_mass(_: &SuiteConfig) -> Result<f64> {
    let mut worst: f64 = 0.0;
    for pair in literal_pairs()?.iter().chain(&periodized_pairs()?) {
        let exact: f64 = pair
            .tau
            .atoms()
            .iter()
            .map(|a| {
                let x = a.x;
                if pair.periodic {
                    0.5 * (1.0 + x * x) * a.w
                } else if x == 0.0 {
                    0.5 * a.w
                } else {
                    (1.0 - x.cos()) * (x * x + 1.0) / (x * x) * a.w
                }
            })
            .sum();
        let mass = bp_pair_map(pair)?.sigma.total_mass();
        if !mass.is_finite() {
            return Ok(f64::INFINITY);
        }
        worst = worst.max((mass - exact).abs());
    }
    Ok(worst)
}

fn harness_config_valid(_: &SuiteConfig) -> Result<f64> {
    let ok = SuiteConfig::default();
    let mut negative = ok.clone();
    negative.tolerances.insert("measures.moment_bounded".into(), -1.0);
    let mut zero = ok.clone();
    zero.tolerances.insert("measures.moment_bounded".into(), 0.0);
    let mut unknown = ok.clone();
    unknown.only = Some("no.such.check".into());
    Ok(count([
        ok.validate().is_err(),
        negative.validate().is_ok(),
        zero.validate().is_ok(),
        unknown.validate().is_ok(),
    ]))
}

fn harness_report_aggregate(_: &SuiteConfig) -> Result<f64> {
    let record = |name: &str, pass: bool| super::CheckRecord {
        name: name.into(),
        measured: 0.0,
        tolerance: 1.0,
        comparison: Comparison::AtMost,
        pass,
        runtime_ms: 0.0,
        error: None,
    };
    let mixed = SuiteReport::from_records(vec![record("b", true), record("a", false)]);
    let good = SuiteReport::from_records(vec![record("b", true), record("a", true)]);
    let empty = SuiteReport::from_records(Vec::new());
    Ok(count([mixed.pass, !good.pass, !empty.pass, mixed.records[0].name != "a"]))
}

fn harness_determinism(config: &SuiteConfig) -> Result<f64> {
    let mut bad = 0.0;
    for k in 0..config.samples {
        let s = descriptor_seed(config, k);
        bad += count([gen_random_descriptor(s, 3, 0.5)? != gen_random_descriptor(s, 3, 0.5)?]);
    }
    for check in [measures_moment_bounded as CheckFn, wrapping_functional_identity] {
        bad += count([check(config)?.to_bits() != check(config)?.to_bits()]);
    }
    Ok(bad)
}

fn harness_generator_validity(config: &SuiteConfig) -> Result<f64> {
    let mut r = rng(config, 24);
    let zs = upper_samples(&mut r, 16);
    let mut bad = 0.0;
    for seed in 0..1000u64 {
        let d = gen_random_descriptor(seed, (seed % 4) as usize, (seed % 11) as f64 / 10.0)?;
        let masses_ok = d.sigma.atoms().iter().all(|a| (0.1..=1.0).contains(&a.mass));
        let beta_ok = (-PI..PI).contains(&d.beta);
        bad += count([!masses_ok, !beta_ok, !membership_check(&classl_f(&d), &zs)?.member]);
    }
    Ok(bad)
}

fn limit_report() -> Result<&'static SuiteReport> {
    static REPORT: OnceLock<std::result::Result<SuiteReport, String>> = OnceLock::new();
    REPORT
        .get_or_init(|| run_limit_demo(&free_gaussian_pair(), 256).map_err(|e| e.to_string()))
        .as_ref()
        .map_err(|e| Error::Inconsistency(e.clone()))
}

fn limit_value(name: &str) -> Result<f64> {
    limit_report()?
        .records
        .iter()
        .find(|r| r.name == name)
        .map(|r| r.measured)
        .ok_or_else(|| Error::Inconsistency(format!("limit demo lacks {name}")))
}

fn limit_boolean_row_product(_: &SuiteConfig) -> Result<f64> {
    limit_value("limit.boolean_row_product")
}

fn limit_free_distance(_: &SuiteConfig) -> Result<f64> {
    limit_value("limit.free_distance")
}

fn limit_free_trend(_: &SuiteConfig) -> Result<f64> {
    limit_value("limit.free_trend_violations")
}

fn limit_infinitesimal_growth(_: &SuiteConfig) -> Result<f64> {
    limit_value("limit.infinitesimal_growth")
}

fn limit_infinitesimal_mass(_: &SuiteConfig) -> Result<f64> {
    limit_value("limit.infinitesimal_mass")
}

fn ac01(_: &SuiteConfig) -> Result<f64> {
    let n = 1024usize;
    let angles = angle_grid(n);
    let (mut wrap_err, mut rec_err): (f64, f64) = (0.0, 0.0);
    for t in [0.5, 1.0, 2.0] {
        let reach = 65 * n as i64;
        let grid = (-reach..=reach)
            .map(|j| {
                let x = TAU * j as f64 / n as f64;
                GridPoint { abscissa: x, density: t / (PI * (x * x + t * t)) }
            })
            .collect();
        let line = MeasureProfile::new(Domain::Line, Vec::new(), grid, "Cauchy");
        for g in &wrap_direct(&line, &angles, Some(64))?.density_grid {
            wrap_err = wrap_err.max((g.density - wrapped_cauchy_density(t, g.abscissa)).abs());
        }
        let q = (-t).exp();
        let rec = recover_circle(&TransformHandle::eta_closed(move |z| q * z), &angles, &DEFAULT_LADDER)?;
        for g in &rec.density_grid {
            rec_err = rec_err.max((g.density - wrapped_cauchy_density(t, g.abscissa)).abs());
        }
    }
    Ok(ratio(&[(wrap_err, 1e-6), (rec_err, 1e-6)], &[]))
}

fn ac02(_: &SuiteConfig) -> Result<f64> {
    let d = z_plus_i_example();
    let prof = classl_density(&d, &linspace(-20.0 * PI, 20.0 * PI, 40_001));
    let mut dens_err: f64 = 0.0;
    for g in &prof.density_grid {
        let x = g.abscissa;
        let exact = (1.0 + x.sin()) / (PI * (x * x + 2.0 * x * x.cos() + 2.0 + 2.0 * x.sin()));
        dens_err = dens_err.max((g.density - exact).abs());
    }
    let eta = wrap_descriptor(&d).to_handle();
    let coeffs = taylor_coefficients(|z| eta.eval(z), 0.5, 13, 64)?;
    let mut coef_err: f64 = coeffs[0].norm();
    let mut fact = 1.0;
    for (k, a) in coeffs[1..].iter().enumerate() {
        if k > 0 {
            fact *= k as f64;
        }
        coef_err = coef_err.max((a - C::i().powu(k as u32) / (E * fact)).norm());
    }
    let maxima = count_local_maxima(&prof.densities()) as f64;
    Ok(ratio(&[(dens_err, 1e-8), (coef_err, 1e-12)], &[(maxima, 1.5)]))
}

fn ac03(_: &SuiteConfig) -> Result<f64> {
    let d = ClassLDescriptor::new(0.0, CircleMeasure::point(0.0, 1.0)?)?;
    let sol = solve_atoms(&d, 200)?;
    let f = classl_f(&d);
    let (mut eq_err, mut w_err): (f64, f64) = (0.0, 0.0);
    for r in &sol.roots {
        eq_err = eq_err.max(atom_root_residual(&d, r).abs());
        w_err = w_err.max((line_atom_weight(&f, r.x, &ROOT_LADDER)?.re - r.weight).abs());
    }
    let pairs = atom_correspondence(&d, 200)?;
    let pres = max_of(pairs.iter().map(|p| (p.line_weight - p.circle_weight).abs()));
    Ok(ratio(&[(eq_err, 1e-10), (w_err, 1e-6), (pres, 1e-6)], &[(sol.captured_mass, 0.99)]))
}

fn ac04(config: &SuiteConfig) -> Result<f64> {
    let mut closed: f64 = 0.0;
    for k in 0..25u64 {
        let s = descriptor_seed(config, 2000 + 2 * k as usize);
        let d1 = gen_random_descriptor(s, (k % 3) as usize, 0.3 + 0.02 * k as f64)?;
        let d2 = gen_random_descriptor(s + 1, ((k + 1) % 3) as usize, 0.5)?;
        let (b1, b2) = (wrap_descriptor(&d1), wrap_descriptor(&d2));
        let lhs = wrap_descriptor(&boolean_add(&d1, &d2));
        let rhs = mult_boolean(&b1, &b2);
        if lhs.sigma != rhs.sigma || rhs.sigma != circle_measure_add(&d1.sigma, &d2.sigma) {
            return Ok(f64::INFINITY);
        }
        closed = closed.max((lhs.gamma - rhs.gamma).norm()).max((rhs.gamma - b1.gamma * b2.gamma).norm());
    }
    Ok(ratio(
        &[
            (homomorphism(config, Op::Boolean, 25)?, 1e-12),
            (homomorphism(config, Op::Monotone, 25)?, 1e-12),
            (homomorphism(config, Op::Free, 25)?, 1e-6),
            (closed, 1e-15),
        ],
        &[],
    ))
}

fn ac05(_: &SuiteConfig) -> Result<f64> {
    let f = TransformHandle::f_closed(|z| z - 4.0 * PI * PI / z);
    let sum = free_add(&f, &f)?.handle;
    let line = recover_line(&sum, &linspace(-4.0 * PI, 4.0 * PI, 40_001), &DEFAULT_LADDER)?;
    let circle = wrap_direct(&line, &angle_grid(4096), None)?;
    let mut closed_grid = circle.density_grid.clone();
    closed_grid.push(GridPoint { abscissa: TAU, density: closed_grid[0].density });
    let closed = MeasureProfile::new(Domain::Circle, circle.atoms.clone(), closed_grid, "");
    let delta_grid = closed.density_grid.iter().map(|g| GridPoint { abscissa: g.abscissa, density: 0.0 }).collect();
    let one = vec![crate::measures::ProfileAtom { at: 0.0, weight: 1.0 }];
    let delta = MeasureProfile::new(Domain::Circle, one, delta_grid, "");
    let tv = crate::convolutions::total_variation(&closed, &delta);
    Ok(ratio(&[(circle.atoms.len() as f64, 0.5)], &[(tv, 0.5)]))
}

fn ac06(_: &SuiteConfig) -> Result<f64> {
    let mut r = ChaCha8Rng::seed_from_u64(6);
    let zs = upper_samples(&mut r, 20);
    let mut st: f64 = 0.0;
    let mut coef: f64 = 0.0;
    for pair in literal_pairs()? {
        let image = bp_pair_map(&pair)?;
        st = st.max(max_of(zs.iter().map(|&z| sigma_tau_residual(&pair, &image, z))));
        coef = coef.max(classical_gap(&pair)?);
    }
    Ok(ratio(&[(st, 1e-8), (coef, 1e-8)], &[]))
}

fn ac07(_: &SuiteConfig) -> Result<f64> {
    let atoms = free_gaussian_preimage_check(0);
    let mut err: f64 = 0.0;
    for k in -3i64..=3 {
        let x = TAU * k as f64;
        match atoms.iter().find(|a| (a.x - x).abs() < 1e-9) {
            Some(a) => err = err.max((a.w - 1.0 / (1.0 + x * x)).abs()),
            None => return Ok(f64::INFINITY),
        }
    }
    Ok(ratio(&[(err, 1e-4)], &[]))
}

fn ac08(config: &SuiteConfig) -> Result<f64> {
    let beta = 0.7;
    let mut r = rng(config, 25);
    let zs = disk_samples(&mut r, 40, 0.9);
    let (mut flow, mut semigroup): (f64, f64) = (0.0, 0.0);
    for h in [0.5, 1.0] {
        let sigma = CircleMeasure::haar(h)?;
        let eta = mult_monotone(beta, &sigma, ODE_STEP);
        let factor = C::new(-h, -beta).exp();
        for &z in &zs {
            flow = flow.max((eta.eval(z)? - factor * z).norm());
        }
        let g = GeneratorHandle::multiplicative(beta, &sigma);
        for (t, s) in [(0.3, 0.7), (0.7, 0.3), (0.3, 0.3), (0.7, 0.7)] {
            let et = monotone_flow_handle(g.clone(), t, ODE_STEP);
            let es = monotone_flow_handle(g.clone(), s, ODE_STEP);
            let ets = monotone_flow_handle(g.clone(), t + s, ODE_STEP);
            for &z in zs.iter().step_by(4) {
                semigroup = semigroup.max((et.eval(es.eval(z)?)? - ets.eval(z)?).norm());
            }
        }
    }
    Ok(ratio(&[(flow, 1e-8), (semigroup, 1e-7)], &[]))
}

fn ac09(config: &SuiteConfig) -> Result<f64> {
    let b = BooleanIDDescriptor::new(C::from_polar(1.0, -0.4), CircleMeasure::point(0.0, 1.0)?)?;
    let half = belinschi_nica_circle(&b, 0.5, 0)?;
    let lift = half.line.as_ref().ok_or_else(|| Error::Inconsistency("missing lift".into()))?;
    let twice = belinschi_nica_lifted(lift, 0.5)?.handle;
    let once = belinschi_nica_circle(&b, 1.0, 0)?.handle;
    let mut r = rng(config, 26);
    let semigroup = eta_gap(&twice, &once, &disk_samples(&mut r, 24, 0.8))?;
    let z = C::from_polar(0.5, 0.7);
    let order = loewner_residual(&b, 0.5, z, 0.02)? / loewner_residual(&b, 0.5, z, 0.01)?;
    let cauchy = BooleanIDDescriptor::new(C::new(1.0, 0.0), CircleMeasure::haar(1.0)?)?;
    let rc = loewner_residual(&cauchy, 0.5, z, 0.01)?;
    Ok(ratio(&[(semigroup, 1e-5), ((order - 4.0).abs(), 0.4), (rc, 1e-8)], &[]))
}

fn ac10(_: &SuiteConfig) -> Result<f64> {
    Ok(ratio(
        &[
            (limit_value("limit.boolean_row_product")?, 1e-12),
            (limit_value("limit.free_distance")?, 1e-2),
            (limit_value("limit.free_trend_violations")?, COUNT_TOL),
        ],
        &[],
    ))
}

fn ac11(config: &SuiteConfig) -> Result<f64> {
    let ws = identity_samples(config);
    let (mut product, mut sigma): (f64, f64) = (0.0, 0.0);
    for k in 0..3 {
        let b = wrap_descriptor(&gen_random_descriptor(descriptor_seed(config, 100 + k), 1, 0.4)?);
        let nu = wrap_descriptor(&gen_random_descriptor(descriptor_seed(config, 200 + k), 1, 0.3)?);
        let prod = mult_free(&b, &nu)?.handle;
        let s_mn = subordination_dist_circle(&b, &nu)?.handle;
        let s_nm = subordination_dist_circle(&nu, &b)?.handle;
        let eta_mu = b.to_handle();
        for &w in &ws {
            let rhs = (s_mn.eval(w)? / w) * (s_nm.eval(w)? / w);
            product = product.max((prod.eval(w)? / w - rhs).norm());
            let z = s_mn.eval(w)?;
            sigma = sigma.max((w / z - sigma_eval(&eta_mu, nu.eta_eval(z))?).norm());
        }
    }
    Ok(ratio(
        &[
            (conv_free_boolean_identity(config)?, 1e-6),
            (product, 1e-6),
            (sigma, 1e-6),
            (conv_commutation(config)?, 1e-6),
        ],
        &[],
    ))
}

fn ac12(_: &SuiteConfig) -> Result<f64> {
    let (w, _) = power_atom_weights()?;
    let base = (w - 0.8).abs();
    let beta = unwrap_descriptor(&wrap_descriptor(&ClassLDescriptor::new(PI, CircleMeasure::point(0.0, 0.5)?)?), 1).beta;
    if (beta - PI).abs() > 1e-12 || principal_arg(C::new(-1.0, 0.0)) != PI {
        return Ok(f64::INFINITY);
    }
    Ok(ratio(&[(base, 1e-4), (conv_power_atom_rule(&SuiteConfig::default())?, 1e-4)], &[]))
}
