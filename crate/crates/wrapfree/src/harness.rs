//! Property-suite runner, random descriptors and the limit-theorem demo.

use std::collections::BTreeMap;
use std::f64::consts::{PI, TAU};
use std::path::{Path, PathBuf};
use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::class_l::ClassLDescriptor;
use crate::convolutions::mult_free_power;
use crate::error::{Error, Result};
use crate::levy::mult_free_eta;
use crate::measures::{CircleAtom, CircleMeasure, FourierDensity, MeasureProfile};
use crate::numerics::{angle_grid, taylor_coefficients};
use crate::transforms::{recover_circle, TransformHandle, C, DEFAULT_LADDER};
use crate::wrapping::{principal_arg, BooleanIDDescriptor};

mod checks;

pub use checks::{check_names, find_check, Check, CheckFn, CheckOutcome, CHECKS, COUNT_TOL};

/// Environment variable that overrides the output directory of `verify`.
pub const OUT_DIR_ENV: &str = "WRAPFREE_OUT_DIR";

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct SuiteConfig {
    pub seed: u64,
    pub tolerances: BTreeMap<String, f64>,
    /// Number of random descriptors or pairs per randomized check.
    pub samples: usize,
    /// Points per grid in density comparisons.
    pub grid_size: usize,
    /// Atom window `K` for the atom solver.
    pub atom_window: usize,
    pub out_dir: Option<PathBuf>,
    pub only: Option<String>,
}

impl Default for SuiteConfig {
    fn default() -> Self {
        SuiteConfig {
            seed: 0,
            tolerances: BTreeMap::new(),
            samples: 8,
            grid_size: 2001,
            atom_window: crate::class_l::DEFAULT_ATOM_WINDOW,
            out_dir: None,
            only: None,
        }
    }
}

impl SuiteConfig {
    pub fn validate(&self) -> Result<()> {
        if let Some((k, v)) = self.tolerances.iter().find(|(_, v)| !(**v > 0.0)) {
            return Err(Error::InvalidArgument(format!("tolerance {k} = {v} is not positive")));
        }
        if self.samples == 0 || self.grid_size < 3 || self.atom_window == 0 {
            return Err(Error::InvalidArgument("samples, grid_size and atom_window must be positive".into()));
        }
        if let Some(name) = &self.only {
            if !check_names().contains(&name.as_str()) {
                return Err(Error::InvalidArgument(format!("unknown check {name:?}")));
            }
        }
        Ok(())
    }

    pub fn tolerance(&self, name: &str, default: f64) -> f64 {
        self.tolerances.get(name).copied().unwrap_or(default)
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|source| Error::Io { path: path.to_path_buf(), source })?;
        serde_json::from_str(&text).map_err(|source| Error::Json { path: path.to_path_buf(), source })
    }
}

/// How a measured value is compared with its threshold.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Comparison {
    AtMost,
    AtLeast,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CheckRecord {
    pub name: String,
    pub measured: f64,
    pub tolerance: f64,
    pub comparison: Comparison,
    pub pass: bool,
    pub runtime_ms: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SuiteReport {
    pub records: Vec<CheckRecord>,
    pub pass: bool,
}

impl SuiteReport {
    pub fn from_records(mut records: Vec<CheckRecord>) -> Self {
        records.sort_by(|a, b| a.name.cmp(&b.name));
        let pass = records.iter().all(|r| r.pass);
        SuiteReport { records, pass }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }

    /// One line per check.
    pub fn summary(&self) -> String {
        let mut s = String::new();
        for r in &self.records {
            let op = match r.comparison {
                Comparison::AtMost => "<=",
                Comparison::AtLeast => ">=",
            };
            let status = if r.pass { "PASS" } else { "FAIL" };
            s.push_str(&format!("{status} {:<40} {:.3e} {op} {:.1e}", r.name, r.measured, r.tolerance));
            if let Some(e) = &r.error {
                s.push_str(&format!("  ({e})"));
            }
            s.push('\n');
        }
        s
    }
}

/// Something `emit` can write.
pub enum Emittable<'a> {
    Profile(&'a MeasureProfile),
    Report(&'a SuiteReport),
}

/// Writes a profile as CSV plus JSON sidecar, or a report as JSON.
pub fn emit(item: Emittable<'_>, path: &Path) -> Result<()> {
    match item {
        Emittable::Profile(p) => p.write(path),
        Emittable::Report(r) => {
            if let Some(parent) = path.parent().filter(|p| !p.as_os_str().is_empty()) {
                std::fs::create_dir_all(parent).map_err(|source| Error::Io { path: parent.to_path_buf(), source })?;
            }
            std::fs::write(path, r.to_json()).map_err(|source| Error::Io { path: path.to_path_buf(), source })
        }
    }
}

/// Deterministic random descriptor: `β ∈ [−π, π)`, `atoms` atoms at uniform
/// angles with masses in `[0.1, 1]`, and a Haar part of mass `haar`.
pub fn gen_random_descriptor(seed: u64, atoms: usize, haar: f64) -> Result<ClassLDescriptor> {
    if atoms > 3 {
        return Err(Error::InvalidArgument("at most 3 atoms".into()));
    }
    if !(0.0..=1.0).contains(&haar) {
        return Err(Error::InvalidArgument("haar mass must lie in [0, 1]".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let beta = rng.gen_range(-PI..PI);
    let list = (0..atoms)
        .map(|_| CircleAtom { theta: rng.gen_range(0.0..TAU), mass: rng.gen_range(0.1..=1.0) })
        .collect();
    let sigma = CircleMeasure::new(list, FourierDensity { c0: haar, cn: Vec::new() })?;
    ClassLDescriptor::new(beta, sigma)
}

/// Fourier moments `m_1..m_n` of a circle law from the Taylor coefficients of `ψ = η/(1 − η)`.
pub fn fourier_moments(eta: &TransformHandle, n: usize) -> Result<Vec<C>> {
    let c = taylor_coefficients(
        |z| {
            let e = eta.eval(z)?;
            Ok::<_, Error>(e / (1.0 - e))
        },
        0.8,
        n + 1,
        256,
    )?;
    Ok(c[1..].to_vec())
}

fn max_distance(a: &[C], b: &[C]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y).norm()).fold(0.0, f64::max)
}

/// Row sizes used by [`run_limit_demo`].
pub const LIMIT_ROWS: [usize; 5] = [16, 32, 64, 128, 256];
pub const LIMIT_MODES: usize = 32;
pub const INFINITESIMAL_ARC: f64 = 0.5;
/// Allowed growth of the mass outside the arc between rows (quadrature noise).
pub const INFINITESIMAL_NOISE: f64 = 1e-8;

/// Limit theorem for the triangular array `ν_{nk} = (γ^{1/n}, σ/n)`, `k ≤ n`.
///
/// Checks that the Boolean row product is `(γ, σ)`, that the free row
/// product approaches `ν_⊠^{γ,σ}` in the first 32 Fourier moments with a
/// decreasing distance, and that the rows are infinitesimal.
pub fn run_limit_demo(pair: &BooleanIDDescriptor, n_max: usize) -> Result<SuiteReport> {
    if n_max > 512 || n_max < LIMIT_ROWS[0] {
        return Err(Error::InvalidArgument("n_max must lie in [16, 512]".into()));
    }
    let rows: Vec<usize> = LIMIT_ROWS.iter().copied().filter(|&n| n <= n_max).collect();
    let target = fourier_moments(&mult_free_eta(pair), LIMIT_MODES)?;
    let mut records = Vec::new();
    let mut boolean_err: f64 = 0.0;
    let mut distances = Vec::new();
    let mut outside = Vec::new();
    let start = Instant::now();
    let grid = angle_grid(4096);
    for &n in &rows {
        let nf = n as f64;
        let row = BooleanIDDescriptor::new(
            C::from_polar(1.0, principal_arg(pair.gamma) / nf),
            pair.sigma.scale(1.0 / nf)?,
        )?;
        let mut prod = BooleanIDDescriptor::point_mass(C::new(1.0, 0.0))?;
        for _ in 0..n {
            prod = crate::convolutions::mult_boolean(&prod, &row);
        }
        let sigma_gap = sigma_distance(&prod.sigma, &pair.sigma);
        boolean_err = boolean_err.max((prod.gamma - pair.gamma).norm()).max(sigma_gap);
        let free = mult_free_power(&row, nf, 0)?;
        distances.push(max_distance(&fourier_moments(&free.handle, LIMIT_MODES)?, &target));
        outside.push(mass_outside_arc(&row, &grid)?);
    }
    let elapsed = start.elapsed().as_secs_f64() * 1e3;
    let push = |records: &mut Vec<CheckRecord>, name: &str, measured: f64, tol: f64, cmp: Comparison| {
        let pass = match cmp {
            Comparison::AtMost => measured <= tol,
            Comparison::AtLeast => measured >= tol,
        };
        records.push(CheckRecord {
            name: name.into(),
            measured,
            tolerance: tol,
            comparison: cmp,
            pass,
            runtime_ms: elapsed,
            error: None,
        });
    };
    push(&mut records, "limit.boolean_row_product", boolean_err, 1e-12, Comparison::AtMost);
    let last = *distances.last().unwrap_or(&f64::INFINITY);
    push(&mut records, "limit.free_distance", last, 1e-2, Comparison::AtMost);
    let increases = distances.windows(2).filter(|w| w[1] > w[0]).count() as f64;
    push(&mut records, "limit.free_trend_violations", increases, 0.0, Comparison::AtMost);
    let growth = outside.windows(2).map(|w| w[1] - w[0]).fold(0.0, f64::max);
    push(&mut records, "limit.infinitesimal_growth", growth, INFINITESIMAL_NOISE, Comparison::AtMost);
    let final_out = *outside.last().unwrap_or(&f64::INFINITY);
    push(&mut records, "limit.infinitesimal_mass", final_out, 1e-3, Comparison::AtMost);
    Ok(SuiteReport::from_records(records))
}

fn sigma_distance(a: &CircleMeasure, b: &CircleMeasure) -> f64 {
    let mut d = (a.fourier().c0 - b.fourier().c0).abs();
    let n = a.fourier().cn.len().max(b.fourier().cn.len());
    for k in 0..n {
        let x = a.fourier().cn.get(k).copied().unwrap_or_default();
        let y = b.fourier().cn.get(k).copied().unwrap_or_default();
        d = d.max((x - y).norm());
    }
    if a.atoms().len() != b.atoms().len() {
        return f64::INFINITY;
    }
    for (x, y) in a.atoms().iter().zip(b.atoms()) {
        d = d.max((x.theta - y.theta).abs()).max((x.mass - y.mass).abs());
    }
    d
}

/// Mass of a Boolean descriptor's law outside the arc `|ζ − 1| < ε`.
pub fn mass_outside_arc(b: &BooleanIDDescriptor, grid: &[f64]) -> Result<f64> {
    let prof = recover_circle(&b.to_handle(), grid, &DEFAULT_LADDER)?;
    let outside = |th: f64| (C::from_polar(1.0, th) - 1.0).norm() >= INFINITESIMAL_ARC;
    let mut m = 0.0;
    for w in prof.density_grid.windows(2) {
        let (a, c) = (&w[0], &w[1]);
        if outside(a.abscissa) && outside(c.abscissa) {
            m += 0.5 * (a.density + c.density) * (c.abscissa - a.abscissa);
        }
    }
    m += prof.atoms.iter().filter(|a| outside(a.at)).map(|a| a.weight).sum::<f64>();
    Ok(m)
}

/// Runs every registered check (or the one named in `config.only`).
pub fn run_suite(config: &SuiteConfig) -> Result<SuiteReport> {
    config.validate()?;
    let mut records = Vec::new();
    for check in CHECKS.iter() {
        if config.only.as_deref().is_some_and(|n| n != check.name) {
            continue;
        }
        let tol = config.tolerance(check.name, check.tolerance);
        let start = Instant::now();
        let outcome = std::panic::catch_unwind(|| (check.run)(config));
        let runtime_ms = start.elapsed().as_secs_f64() * 1e3;
        let (measured, error) = match outcome {
            Ok(Ok(v)) => (v, None),
            Ok(Err(e)) => (f64::NAN, Some(e.to_string())),
            Err(_) => (f64::NAN, Some("panicked".to_string())),
        };
        let pass = match check.comparison {
            Comparison::AtMost => measured <= tol,
            Comparison::AtLeast => measured >= tol,
        };
        records.push(CheckRecord {
            name: check.name.to_string(),
            measured,
            tolerance: tol,
            comparison: check.comparison,
            pass,
            runtime_ms,
            error,
        });
    }
    let report = SuiteReport::from_records(records);
    if let Some(dir) = &config.out_dir {
        emit(Emittable::Report(&report), &dir.join("report.json"))?;
    }
    Ok(report)
}
