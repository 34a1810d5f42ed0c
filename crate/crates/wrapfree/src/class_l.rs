//! The class 𝓛 of measures on the line whose `F`-transform commutes with
//! translation by `2π`, parameterized by pairs `(β, σ)`:
//!
//! `F(z) = z − β + i ∫ (1 + ζe^{iz})/(1 − ζe^{iz}) dσ(ζ)`.

use std::f64::consts::{PI, TAU};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::measures::{CircleMeasure, Domain, GridPoint, MeasureProfile, RealAtom, RealAtomicMeasure};
use crate::transforms::{TransformHandle, TransformKind, C};

/// Default number of periods on each side of 0 for atom enumeration.
pub const DEFAULT_ATOM_WINDOW: usize = 200;
/// Distance kept from cotangent poles when bracketing roots.
pub const POLE_STANDOFF: f64 = 1e-9;

#[derive(Deserialize)]
struct RawDescriptor {
    beta: f64,
    #[serde(default)]
    sigma: CircleMeasure,
}

/// A class-𝓛 measure given by `(β, σ)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawDescriptor")]
pub struct ClassLDescriptor {
    pub beta: f64,
    pub sigma: CircleMeasure,
    #[serde(skip)]
    branch: i64,
}

impl TryFrom<RawDescriptor> for ClassLDescriptor {
    type Error = Error;

    fn try_from(raw: RawDescriptor) -> Result<Self> {
        ClassLDescriptor::new(raw.beta, raw.sigma)
    }
}

impl ClassLDescriptor {
    pub fn new(beta: f64, sigma: CircleMeasure) -> Result<Self> {
        if !beta.is_finite() {
            return Err(Error::InvalidArgument("beta must be finite".into()));
        }
        Ok(ClassLDescriptor { beta, sigma, branch: branch_of(beta) })
    }

    /// The point mass `δ_a`.
    pub fn point_mass(a: f64) -> Self {
        Self::new(a, CircleMeasure::zero()).expect("finite location")
    }

    /// Cauchy law of scale `t`, centered at 0.
    pub fn cauchy(t: f64) -> Result<Self> {
        Self::new(0.0, CircleMeasure::haar(t)?)
    }

    pub fn branch(&self) -> i64 {
        self.branch
    }

    /// `f(w) = −β + i ∫ (1 + ζw)/(1 − ζw) dσ(ζ)`, so that `F(z) = z + f(e^{iz})`.
    pub fn f_disk(&self, w: C) -> C {
        -self.beta + C::i() * self.sigma.caratheodory(w)
    }

    pub fn f_eval(&self, z: C) -> C {
        z + self.f_disk((C::i() * z).exp())
    }

    pub fn f_derivative(&self, z: C) -> C {
        let w = (C::i() * z).exp();
        1.0 - w * self.sigma.caratheodory_derivative(w)
    }

    /// The closed-form `F`-transform.
    pub fn to_handle(&self) -> TransformHandle {
        classl_f(self)
    }
}

fn branch_of(beta: f64) -> i64 {
    (-beta / TAU).floor() as i64
}

/// Closed-form `F`-transform of a descriptor.
pub fn classl_f(d: &ClassLDescriptor) -> TransformHandle {
    let (a, b) = (d.clone(), d.clone());
    TransformHandle::f_closed(move |z| a.f_eval(z))
        .with_derivative(move |z| Ok(b.f_derivative(z)))
        .with_flags(true, false)
}

/// Result of a membership test.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Membership {
    pub member: bool,
    /// `max |F(z + 2π) − F(z) − 2π|` over the samples.
    pub deviation: f64,
    /// Largest violation of `Im F(z) ≥ Im z`.
    pub pick_violation: f64,
}

/// Tests 2π-equivariance and the Pick property of `F` on samples in `ℂ⁺`.
pub fn membership_check(f: &TransformHandle, samples: &[C]) -> Result<Membership> {
    if f.kind() != TransformKind::F {
        return Err(Error::KindMismatch);
    }
    let mut deviation: f64 = 0.0;
    let mut pick: f64 = 0.0;
    for &z in samples {
        let v = f.eval(z)?;
        let shifted = f.eval(z + TAU)?;
        deviation = deviation.max((shifted - v - TAU).norm());
        pick = pick.max(z.im - v.im);
    }
    Ok(Membership { member: deviation < 1e-8 && pick <= 1e-12, deviation, pick_violation: pick })
}

/// A real root of `x − β = Σ a_j cot((θ_j + x)/2)` with its atom weight.
///
/// The root is stored as `pole + offset`, where `pole = −θ_k + 2πm` is the
/// nearest cotangent singularity; the offset keeps full relative precision.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AtomRoot {
    pub x: f64,
    pub pole: f64,
    /// Index of the σ-atom owning `pole`.
    pub pole_atom: usize,
    pub offset: f64,
    pub weight: f64,
    /// Index of the singularity-bounded interval, counted from the one starting at the first pole ≥ 0.
    pub interval: i64,
}

/// Atoms of a class-𝓛 measure with purely atomic σ.
#[derive(Debug, Clone, PartialEq)]
pub struct AtomSolution {
    pub roots: Vec<AtomRoot>,
    pub measure: RealAtomicMeasure,
    pub captured_mass: f64,
    /// Analytic estimate of the mass outside the window.
    pub tail_estimate: f64,
}

struct AtomFrame {
    thetas: Vec<f64>,
    masses: Vec<f64>,
}

impl AtomFrame {
    /// Angles `(θ_i − θ_k)` reduced to `(−π, π]`.
    fn rel(&self, k: usize) -> Vec<f64> {
        self.thetas
            .iter()
            .map(|&t| {
                let mut d = (t - self.thetas[k]).rem_euclid(TAU);
                if d > PI {
                    d -= TAU;
                }
                d
            })
            .collect()
    }

    fn cot_sum(&self, rel: &[f64], v: f64) -> f64 {
        rel.iter().zip(&self.masses).map(|(d, a)| a / ((d + v) / 2.0).tan()).sum()
    }

    fn weight(&self, rel: &[f64], v: f64) -> f64 {
        let s: f64 = rel
            .iter()
            .zip(&self.masses)
            .map(|(d, a)| {
                let c = 1.0 / ((d + v) / 2.0).tan();
                a * (1.0 + c * c)
            })
            .sum();
        1.0 / (1.0 + 0.5 * s)
    }
}

/// Residual `x − β − Σ a_j cot((θ_j + x)/2)` evaluated in pole-relative form.
pub fn atom_root_residual(d: &ClassLDescriptor, r: &AtomRoot) -> f64 {
    let frame = frame_of(d);
    let rel = frame.rel(r.pole_atom);
    (r.pole - d.beta + r.offset) - frame.cot_sum(&rel, r.offset)
}

fn frame_of(d: &ClassLDescriptor) -> AtomFrame {
    AtomFrame {
        thetas: d.sigma.atoms().iter().map(|a| a.theta).collect(),
        masses: d.sigma.atoms().iter().map(|a| a.mass).collect(),
    }
}

/// Finds every atom in `2K·N` consecutive singularity-bounded intervals around 0.
pub fn solve_atoms(d: &ClassLDescriptor, window: usize) -> Result<AtomSolution> {
    if !d.sigma.is_purely_atomic() {
        return Err(Error::InvalidArgument("solve_atoms needs a purely atomic, nonzero σ".into()));
    }
    if window == 0 {
        return Err(Error::InvalidArgument("window must be at least 1".into()));
    }
    let frame = frame_of(d);
    let n = frame.thetas.len();
    // Poles in [0, 2π): p_k = (−θ_k) mod 2π, sorted.
    let mut order: Vec<(f64, usize)> = (0..n).map(|k| (crate::measures::reduce_angle(-frame.thetas[k]), k)).collect();
    order.sort_by(|a, b| a.0.total_cmp(&b.0));
    let rels: Vec<Vec<f64>> = (0..n).map(|k| frame.rel(k)).collect();
    let mut roots = Vec::with_capacity(2 * window * n);
    let k = window as i64;
    for period in -k..k {
        for (slot, &(p, left)) in order.iter().enumerate() {
            let (right, width) = if slot + 1 < n {
                (order[slot + 1].1, order[slot + 1].0 - p)
            } else {
                (order[0].1, order[0].0 + TAU - p)
            };
            let left_pole = p + TAU * period as f64;
            let right_pole = left_pole + width;
            let g_left = |v: f64| (left_pole - d.beta + v) - frame.cot_sum(&rels[left], v);
            let g_right = |v: f64| (right_pole - d.beta + v) - frame.cot_sum(&rels[right], v);
            let half = 0.5 * width;
            let (pole, pole_atom, offset) = if g_left(half) >= 0.0 {
                (left_pole, left, bisect(g_left, POLE_STANDOFF.min(half), half))
            } else {
                (right_pole, right, bisect(g_right, -half, -POLE_STANDOFF.min(half)))
            };
            let weight = frame.weight(&rels[pole_atom], offset);
            roots.push(AtomRoot {
                x: pole + offset,
                pole,
                pole_atom,
                offset,
                weight,
                interval: period * n as i64 + slot as i64,
            });
        }
    }
    roots.sort_by(|a, b| a.x.total_cmp(&b.x));
    let captured: f64 = roots.iter().map(|r| r.weight).sum();
    if captured < 0.5 {
        return Err(Error::WindowTooSmall { captured });
    }
    let total_sigma = d.sigma.total_mass();
    let reach = TAU * window as f64;
    // Near the poles of atom j the weights behave like 2a_j/x².
    let tail_estimate = 2.0 * total_sigma / (PI * reach);
    let measure = RealAtomicMeasure::new(roots.iter().map(|r| RealAtom { x: r.x, w: r.weight }).collect())?;
    Ok(AtomSolution { roots, measure, captured_mass: captured, tail_estimate })
}

/// Bisection for an increasing function with `g(lo) < 0 < g(hi)`, to full precision.
fn bisect(g: impl Fn(f64) -> f64, mut lo: f64, mut hi: f64) -> f64 {
    for _ in 0..400 {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if g(mid) < 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    if g(lo).abs() <= g(hi).abs() {
        lo
    } else {
        hi
    }
}

/// Absolutely continuous density `(1/π) Im f / ((x + Re f)² + (Im f)²)` with `f = f(e^{ix})`.
pub fn classl_density(d: &ClassLDescriptor, grid: &[f64]) -> MeasureProfile {
    let pts = grid
        .iter()
        .map(|&x| {
            let f = d.f_disk(C::from_polar(1.0, x));
            let dens = if f.re.is_finite() && f.im.is_finite() {
                f.im / (PI * ((x + f.re).powi(2) + f.im * f.im))
            } else {
                0.0
            };
            GridPoint { abscissa: x, density: dens }
        })
        .collect();
    let mut note = format!(
        "closed-form boundary density on [{:.6}, {:.6}], {} points",
        grid.first().copied().unwrap_or(0.0),
        grid.last().copied().unwrap_or(0.0),
        grid.len()
    );
    if !d.sigma.atoms().is_empty() {
        note.push_str("; atomic-part-present: profile holds the absolutely continuous part only");
    }
    if !d.sigma.has_density() {
        note.push_str("; σ has no density part, absolutely continuous part vanishes");
    }
    MeasureProfile::new(Domain::Line, Vec::new(), pts, note)
}

/// Branch index `n = ⌊−β/2π⌋`.
pub fn branch_index(d: &ClassLDescriptor) -> i64 {
    d.branch
}

/// `(β − 2πm, σ)`, the descriptor of `μ ⊎ δ_{2πm}`.
pub fn shift(d: &ClassLDescriptor, m: i64) -> ClassLDescriptor {
    ClassLDescriptor::new(d.beta - TAU * m as f64, d.sigma.clone()).expect("finite beta")
}

/// The `f(z) = z + i` example: `β = 0`, σ with `c0 = 1`, `c1 = i/2`.
pub fn z_plus_i_example() -> ClassLDescriptor {
    let sigma = CircleMeasure::from_fourier(1.0, vec![Complex64::new(0.0, 0.5)]).expect("valid density");
    ClassLDescriptor::new(0.0, sigma).expect("finite beta")
}
