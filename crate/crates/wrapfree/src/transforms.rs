//! Analytic transforms, their inverses, and boundary-value recovery of measures.
//!
//! A [`TransformHandle`] is either a self-map `F` of the upper half-plane
//! (reciprocal Cauchy transform of a measure on the line) or a self-map `η`
//! of the unit disk (η-transform of a measure on the circle). Handles are
//! cheap to clone and may wrap closed forms, compositions, fixed-point
//! iterations or ODE flows.

use std::f64::consts::{PI, TAU};
use std::fmt;
use std::sync::Arc;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::measures::{Domain, GridPoint, MeasureProfile, ProfileAtom};
use crate::numerics::extrapolate_to_zero;

pub type C = Complex64;

type EvalFn = dyn Fn(C) -> Result<C> + Send + Sync;

/// Anchor height for continuation of `F⁻¹`.
pub const F_ANCHOR: f64 = 1e3;
/// Anchor radius for continuation of `η⁻¹`.
pub const ETA_ANCHOR: f64 = 1e-3;
/// Stolz-region guard for direct evaluation of `φ`.
pub const STOLZ_HEIGHT: f64 = 8.0;
pub const MAX_NEWTON_ITERATIONS: usize = 200;
pub const MAX_STEP_HALVINGS: usize = 10;
/// Full Newton steps taken after the tolerance is met, while the residual keeps dropping.
pub const POLISH_STEPS: usize = 3;
/// Atoms whose residue estimate falls below this are discarded.
pub const ATOM_THRESHOLD: f64 = 1e-4;
/// Largest relative gap between the finest residue estimate and its extrapolation.
pub const ATOM_SETTLE: f64 = 0.05;
/// Default boundary ladder: `y` offsets for the line, `1 − r` for the circle.
pub const DEFAULT_LADDER: [f64; 3] = [1e-2, 1e-3, 1e-4];
/// Ladder scale used for the refinement pass at a detected atom.
pub const REFINE_SCALE: f64 = 1e-2;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TransformKind {
    /// Self-map of the upper half-plane.
    F,
    /// Self-map of the unit disk fixing 0.
    Eta,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Provenance {
    ClosedForm,
    Composed,
    FixedPoint,
    Inversion,
    Ode,
}

impl fmt::Display for Provenance {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Provenance::ClosedForm => "closed-form",
            Provenance::Composed => "composed",
            Provenance::FixedPoint => "fixed-point",
            Provenance::Inversion => "inversion",
            Provenance::Ode => "ode",
        };
        f.write_str(s)
    }
}

/// Evaluator for an `F`-transform on `ℂ⁺` or an `η`-transform on `𝔻`.
#[derive(Clone)]
pub struct TransformHandle {
    kind: TransformKind,
    eval: Arc<EvalFn>,
    deriv: Option<Arc<EvalFn>>,
    /// `F(z + 2π) = F(z) + 2π`.
    pub periodic_shift: bool,
    /// `η(z) = 0` only at `z = 0`.
    pub vanishes_only_at_zero: bool,
    pub provenance: Provenance,
}

impl fmt::Debug for TransformHandle {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("TransformHandle")
            .field("kind", &self.kind)
            .field("periodic_shift", &self.periodic_shift)
            .field("vanishes_only_at_zero", &self.vanishes_only_at_zero)
            .field("provenance", &self.provenance)
            .finish()
    }
}

impl TransformHandle {
    pub fn new(
        kind: TransformKind,
        provenance: Provenance,
        eval: impl Fn(C) -> Result<C> + Send + Sync + 'static,
    ) -> Self {
        TransformHandle {
            kind,
            eval: Arc::new(eval),
            deriv: None,
            periodic_shift: false,
            vanishes_only_at_zero: false,
            provenance,
        }
    }

    /// Closed-form `F` from an infallible function.
    pub fn f_closed(f: impl Fn(C) -> C + Send + Sync + 'static) -> Self {
        Self::new(TransformKind::F, Provenance::ClosedForm, move |z| Ok(f(z)))
    }

    /// Closed-form `η` from an infallible function.
    pub fn eta_closed(f: impl Fn(C) -> C + Send + Sync + 'static) -> Self {
        Self::new(TransformKind::Eta, Provenance::ClosedForm, move |z| Ok(f(z)))
    }

    pub fn with_derivative(mut self, d: impl Fn(C) -> Result<C> + Send + Sync + 'static) -> Self {
        self.deriv = Some(Arc::new(d));
        self
    }

    pub fn with_flags(mut self, periodic_shift: bool, vanishes_only_at_zero: bool) -> Self {
        self.periodic_shift = periodic_shift;
        self.vanishes_only_at_zero = vanishes_only_at_zero;
        self
    }

    pub fn with_provenance(mut self, p: Provenance) -> Self {
        self.provenance = p;
        self
    }

    pub fn kind(&self) -> TransformKind {
        self.kind
    }

    /// Evaluates the transform; non-finite output is reported as an error.
    pub fn eval(&self, z: C) -> Result<C> {
        let v = (self.eval)(z)?;
        if v.re.is_finite() && v.im.is_finite() {
            Ok(v)
        } else {
            Err(Error::NanInEvaluation)
        }
    }

    /// Whether `z` lies in the natural domain (`ℂ⁺` or `𝔻`).
    pub fn in_domain(&self, z: C) -> bool {
        match self.kind {
            TransformKind::F => z.im > 0.0 && z.re.is_finite() && z.im.is_finite(),
            TransformKind::Eta => z.norm() < 1.0,
        }
    }

    fn boundary_distance(&self, z: C) -> f64 {
        match self.kind {
            TransformKind::F => z.im,
            TransformKind::Eta => 1.0 - z.norm(),
        }
    }

    /// Complex derivative, analytic when provided, otherwise a central difference.
    pub fn derivative(&self, z: C) -> Result<C> {
        if let Some(d) = &self.deriv {
            return d(z);
        }
        let h = (1e-6 * z.norm().max(1.0)).min(0.25 * self.boundary_distance(z).max(0.0));
        if h <= 0.0 {
            return Err(Error::LeftDomain);
        }
        Ok((self.eval(z + h)? - self.eval(z - h)?) / (2.0 * h))
    }

    /// `self ∘ inner`.
    pub fn compose(&self, inner: &TransformHandle) -> Result<TransformHandle> {
        if self.kind != inner.kind {
            return Err(Error::KindMismatch);
        }
        let (a, b) = (self.clone(), inner.clone());
        let mut h = TransformHandle::new(self.kind, Provenance::Composed, move |z| a.eval(b.eval(z)?));
        if let (Some(da), Some(db)) = (self.deriv.clone(), inner.deriv.clone()) {
            let b2 = inner.clone();
            h = h.with_derivative(move |z| Ok(da(b2.eval(z)?)? * db(z)?));
        }
        Ok(h.with_flags(
            self.periodic_shift && inner.periodic_shift,
            self.vanishes_only_at_zero && inner.vanishes_only_at_zero,
        ))
    }

    /// The identity map of the given kind.
    pub fn identity(kind: TransformKind) -> TransformHandle {
        TransformHandle::new(kind, Provenance::ClosedForm, Ok)
            .with_derivative(|_| Ok(C::new(1.0, 0.0)))
            .with_flags(true, true)
    }
}

/// Outcome of a successful inversion.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct InversionResult {
    pub preimage: C,
    pub residual: f64,
    pub iterations: usize,
}

/// Damped Newton solve of `T(z) = target` from `seed`, staying inside the domain.
pub fn invert_transform(t: &TransformHandle, target: C, seed: C, tol: f64) -> Result<InversionResult> {
    if !t.in_domain(seed) {
        return Err(Error::LeftDomain);
    }
    let mut z = seed;
    let mut r = t.eval(z)? - target;
    let mut iterations = 0;
    while r.norm() > tol {
        if iterations >= MAX_NEWTON_ITERATIONS {
            return Err(Error::NoConvergence { residual: r.norm(), iterations });
        }
        iterations += 1;
        let d = t.derivative(z)?;
        if d.norm() == 0.0 || !d.re.is_finite() || !d.im.is_finite() {
            return Err(Error::NoConvergence { residual: r.norm(), iterations });
        }
        let step = -r / d;
        let mut lambda = 1.0;
        let mut accepted = None;
        let mut any_in_domain = false;
        for _ in 0..=MAX_STEP_HALVINGS {
            let zn = z + lambda * step;
            if t.in_domain(zn) {
                any_in_domain = true;
                if let Ok(v) = t.eval(zn) {
                    let rn = v - target;
                    if rn.norm() < r.norm() {
                        accepted = Some((zn, rn));
                        break;
                    }
                }
            }
            lambda *= 0.5;
        }
        match accepted {
            Some((zn, rn)) => {
                z = zn;
                r = rn;
            }
            None if !any_in_domain => return Err(Error::LeftDomain),
            None => return Err(Error::NoConvergence { residual: r.norm(), iterations }),
        }
    }
    for _ in 0..POLISH_STEPS {
        let Ok(d) = t.derivative(z) else { break };
        let zn = z - r / d;
        match t.eval(zn) {
            Ok(v) if t.in_domain(zn) && (v - target).norm() < r.norm() => {
                z = zn;
                r = v - target;
            }
            _ => break,
        }
    }
    Ok(InversionResult { preimage: z, residual: r.norm(), iterations })
}

/// Default absolute tolerance for inverting at `target`.
pub fn default_tol(target: C) -> f64 {
    1e-12 * target.norm().max(1.0)
}

/// Inversion by continuation along a sequence of targets, each seeded by the
/// previous preimage. Failed steps are bisected up to depth 24.
pub fn invert_along(t: &TransformHandle, path: &[C], seed: C) -> Result<InversionResult> {
    let mut z = seed;
    let mut last = InversionResult { preimage: seed, residual: 0.0, iterations: 0 };
    let mut prev_target: Option<C> = None;
    for &w in path {
        let from = prev_target.unwrap_or(w);
        last = continue_segment(t, from, w, z, 0)?;
        z = last.preimage;
        prev_target = Some(w);
    }
    Ok(last)
}

fn continue_segment(t: &TransformHandle, from: C, to: C, seed: C, depth: usize) -> Result<InversionResult> {
    let predictor = if from != to {
        t.derivative(seed).ok().filter(|d| d.norm() > 0.0).map(|d| seed + (to - from) / d)
    } else {
        None
    };
    let first = predictor.filter(|p| t.in_domain(*p)).unwrap_or(seed);
    let attempt = invert_transform(t, to, first, default_tol(to))
        .or_else(|_| invert_transform(t, to, seed, default_tol(to)));
    match attempt {
        Ok(r) => Ok(r),
        Err(e) if depth >= 24 || from == to => Err(e),
        Err(_) => {
            let mid = 0.5 * (from + to);
            let half = continue_segment(t, from, mid, seed, depth + 1)?;
            continue_segment(t, mid, to, half.preimage, depth + 1)
        }
    }
}

/// Inverts `T` at `target` by continuation from the trust anchor: a vertical
/// segment from height `10³` for `F`, a radial segment from radius `10⁻³` for `η`.
pub fn invert_continued(t: &TransformHandle, target: C) -> Result<InversionResult> {
    match t.kind() {
        TransformKind::F => {
            if target.im <= 0.0 {
                return Err(Error::LeftDomain);
            }
            let top = target.im.max(F_ANCHOR);
            let anchor = C::new(target.re, top);
            let fa = t.eval(anchor)?;
            let start = invert_transform(t, anchor, anchor - (fa - anchor), default_tol(anchor))
                .or_else(|_| invert_transform(t, anchor, anchor, default_tol(anchor)))?;
            let n = ((top / target.im).ln() / 0.5f64.ln().abs()).ceil().max(1.0) as usize;
            let path: Vec<C> = (1..=n)
                .map(|k| C::new(target.re, top * (target.im / top).powf(k as f64 / n as f64)))
                .collect();
            invert_along(t, &path, start.preimage)
        }
        TransformKind::Eta => {
            let rho = target.norm();
            if rho == 0.0 {
                return Ok(InversionResult { preimage: C::new(0.0, 0.0), residual: 0.0, iterations: 0 });
            }
            let d0 = t.derivative(C::new(0.0, 0.0))?;
            if d0.norm() < 1e-12 {
                return Err(Error::EtaDerivativeZero);
            }
            let r0 = rho.min(ETA_ANCHOR);
            let anchor = target * (r0 / rho);
            let start = invert_transform(t, anchor, anchor / d0, default_tol(anchor) * r0)?;
            if r0 == rho {
                return Ok(start);
            }
            let n = ((rho / r0).ln() / 1.2f64.ln()).ceil().max(1.0) as usize;
            let path: Vec<C> = (1..=n).map(|k| anchor * (rho / r0).powf(k as f64 / n as f64)).collect();
            invert_along(t, &path, start.preimage)
        }
    }
}

/// `φ(z) = F⁻¹(z) − z`.
pub fn phi_eval(f: &TransformHandle, z: C) -> Result<C> {
    if f.kind() != TransformKind::F {
        return Err(Error::KindMismatch);
    }
    Ok(invert_continued(f, z)?.preimage - z)
}

/// `Σ(z) = η⁻¹(z)/z`, with `Σ(0) = 1/η'(0)`.
pub fn sigma_eval(eta: &TransformHandle, z: C) -> Result<C> {
    if eta.kind() != TransformKind::Eta {
        return Err(Error::KindMismatch);
    }
    let d0 = eta.derivative(C::new(0.0, 0.0))?;
    if d0.norm() < 1e-12 {
        return Err(Error::EtaDerivativeZero);
    }
    if z.norm() == 0.0 {
        return Ok(1.0 / d0);
    }
    Ok(invert_continued(eta, z)?.preimage / z)
}

/// Residue estimate `lim iy/F(x+iy)` at a known location.
pub fn line_atom_weight(f: &TransformHandle, x: f64, ladder: &[f64]) -> Result<C> {
    let vals = ladder
        .iter()
        .map(|&y| Ok(C::new(0.0, y) / f.eval(C::new(x, y))?))
        .collect::<Result<Vec<_>>>()?;
    Ok(extrapolate_to_zero(ladder, &vals))
}

/// Residue estimate `lim (1−r)η(r e^{−iθ})/(1 − η(r e^{−iθ}))` for an atom at `e^{iθ}`.
pub fn circle_atom_weight(eta: &TransformHandle, theta: f64, ladder: &[f64]) -> Result<C> {
    let u = C::from_polar(1.0, -theta);
    let vals = ladder
        .iter()
        .map(|&s| {
            let e = eta.eval((1.0 - s) * u)?;
            Ok(s * e / (1.0 - e))
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(extrapolate_to_zero(ladder, &vals))
}

/// Poisson-smoothed density at height `y` minus the detected atoms' share, extrapolated to `y = 0`.
fn line_density_at(f: &TransformHandle, x: f64, ladder: &[f64], atoms: &[ProfileAtom]) -> Result<f64> {
    let vals = ladder
        .iter()
        .map(|&y| {
            let smooth = -(1.0 / f.eval(C::new(x, y))?).im / PI;
            let atomic: f64 = atoms.iter().map(|a| a.weight * y / (PI * ((x - a.at).powi(2) + y * y))).sum();
            Ok(C::new(smooth - atomic, 0.0))
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(extrapolate_to_zero(ladder, &vals).re)
}

fn circle_density_at(eta: &TransformHandle, theta: f64, ladder: &[f64], atoms: &[ProfileAtom]) -> Result<f64> {
    let u = C::from_polar(1.0, -theta);
    let vals = ladder
        .iter()
        .map(|&s| {
            let r = 1.0 - s;
            let e = eta.eval(r * u)?;
            let atomic: f64 = atoms
                .iter()
                .map(|a| a.weight * (1.0 - r * r) / (TAU * (1.0 - C::from_polar(r, a.at - theta)).norm_sqr()))
                .sum();
            Ok(C::new(((1.0 + e) / (1.0 - e)).re / TAU - atomic, 0.0))
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(extrapolate_to_zero(ladder, &vals).re)
}

fn check_ladder(ladder: &[f64]) -> Result<()> {
    if ladder.is_empty() || ladder.iter().any(|&s| !(s > 0.0 && s < 1.0)) {
        return Err(Error::InvalidArgument("ladder offsets must lie in (0, 1)".into()));
    }
    if ladder.windows(2).any(|w| w[1] >= w[0]) {
        return Err(Error::InvalidArgument("ladder offsets must decrease toward 0".into()));
    }
    Ok(())
}

/// Atom search over a grid: local maxima of the coarse residue estimate are
/// refined by golden-section search at each ladder level and then measured
/// with a ladder scaled by [`REFINE_SCALE`].
fn detect_atoms(
    grid: &[f64],
    ladder: &[f64],
    estimate: impl Fn(f64, f64) -> Result<C>,
    weight: impl Fn(f64, &[f64]) -> Result<C>,
    periodic: bool,
) -> Result<Vec<ProfileAtom>> {
    if grid.len() < 2 {
        return Ok(Vec::new());
    }
    let coarse: Vec<f64> = grid
        .iter()
        .map(|&x| estimate(x, ladder[0]).map(|c| c.norm()))
        .collect::<Result<_>>()?;
    let n = grid.len();
    let mut atoms: Vec<ProfileAtom> = Vec::new();
    let spacing = (grid[n - 1] - grid[0]) / (n - 1) as f64;
    for i in 0..n {
        let left = if i > 0 { coarse[i - 1] } else if periodic { coarse[n - 1] } else { 0.0 };
        let right = if i + 1 < n { coarse[i + 1] } else if periodic { coarse[0] } else { 0.0 };
        if coarse[i] < ATOM_THRESHOLD || coarse[i] < left || coarse[i] <= right {
            continue;
        }
        let mut x = grid[i];
        let mut half = spacing.abs().max(ladder[0]);
        for &s in ladder {
            x = golden_max(|p| estimate(p, s).map(|c| c.norm()).unwrap_or(0.0), x - half, x + half);
            half = 4.0 * s;
        }
        let refined: Vec<f64> = ladder.iter().map(|s| s * REFINE_SCALE).collect();
        for &s in &refined {
            x = golden_max(|p| estimate(p, s).map(|c| c.norm()).unwrap_or(0.0), x - half, x + half);
            half = 4.0 * s;
        }
        let w = weight(x, &refined)?;
        // A square-root edge gives estimates decaying like √s instead of settling.
        let last = estimate(x, refined[refined.len() - 1])?;
        let settled = (last - w).norm() <= ATOM_SETTLE * w.norm();
        if w.re > ATOM_THRESHOLD && settled && !atoms.iter().any(|a| (a.at - x).abs() < 1e-8) {
            atoms.push(ProfileAtom { at: x, weight: w.re });
        }
    }
    Ok(atoms)
}

fn golden_max(f: impl Fn(f64) -> f64, mut a: f64, mut b: f64) -> f64 {
    let g = 0.5 * (5f64.sqrt() - 1.0);
    let mut c = b - g * (b - a);
    let mut d = a + g * (b - a);
    let (mut fc, mut fd) = (f(c), f(d));
    for _ in 0..80 {
        if (b - a).abs() <= 1e-14 * (1.0 + a.abs()) {
            break;
        }
        if fc > fd {
            b = d;
            d = c;
            fd = fc;
            c = b - g * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + g * (b - a);
            fd = f(d);
        }
    }
    0.5 * (a + b)
}

/// Recovers a measure on the line from boundary values of `F`.
pub fn recover_line(f: &TransformHandle, grid: &[f64], y_ladder: &[f64]) -> Result<MeasureProfile> {
    if f.kind() != TransformKind::F {
        return Err(Error::KindMismatch);
    }
    check_ladder(y_ladder)?;
    let atoms = detect_atoms(
        grid,
        y_ladder,
        |x, y| Ok(C::new(0.0, y) / f.eval(C::new(x, y))?),
        |x, l| line_atom_weight(f, x, l),
        false,
    )?;
    let density = grid
        .iter()
        .map(|&x| Ok(GridPoint { abscissa: x, density: line_density_at(f, x, y_ladder, &atoms)? }))
        .collect::<Result<Vec<_>>>()?;
    let note = format!(
        "line window [{:.6}, {:.6}], {} points, y ladder {:?}",
        grid.first().copied().unwrap_or(0.0),
        grid.last().copied().unwrap_or(0.0),
        grid.len(),
        y_ladder
    );
    Ok(MeasureProfile::new(Domain::Line, atoms, density, note))
}

/// Recovers a measure on the circle from boundary values of `η`.
///
/// The abscissa θ labels the point `e^{iθ}`; densities are with respect to `dθ`.
pub fn recover_circle(eta: &TransformHandle, angle_grid: &[f64], r_ladder: &[f64]) -> Result<MeasureProfile> {
    if eta.kind() != TransformKind::Eta {
        return Err(Error::KindMismatch);
    }
    check_ladder(r_ladder)?;
    let atoms = detect_atoms(
        angle_grid,
        r_ladder,
        |th, s| {
            let e = eta.eval((1.0 - s) * C::from_polar(1.0, -th))?;
            Ok(s * e / (1.0 - e))
        },
        |th, l| circle_atom_weight(eta, th, l),
        true,
    )?;
    let atoms: Vec<ProfileAtom> = atoms
        .into_iter()
        .map(|a| ProfileAtom { at: crate::measures::reduce_angle(a.at), weight: a.weight })
        .collect();
    let density = angle_grid
        .iter()
        .map(|&th| Ok(GridPoint { abscissa: th, density: circle_density_at(eta, th, r_ladder, &atoms)? }))
        .collect::<Result<Vec<_>>>()?;
    let note = format!("circle grid of {} angles, 1-r ladder {:?}", angle_grid.len(), r_ladder);
    Ok(MeasureProfile::new(Domain::Circle, atoms, density, note))
}

/// Largest violation of `Im F(z) ≥ Im z` (kind `F`) or `|η(z)| ≤ |z|` (kind `η`) over samples.
pub fn self_map_violation(t: &TransformHandle, samples: &[C]) -> Result<f64> {
    let mut worst: f64 = 0.0;
    for &z in samples {
        let v = t.eval(z)?;
        let gap = match t.kind() {
            TransformKind::F => z.im - v.im,
            TransformKind::Eta => v.norm() - z.norm(),
        };
        worst = worst.max(gap);
    }
    if t.kind() == TransformKind::Eta {
        worst = worst.max(t.eval(C::new(0.0, 0.0))?.norm());
    }
    Ok(worst)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn newton_inverts_affine() {
        let f = TransformHandle::f_closed(|z| z + C::new(0.0, 1.0));
        let r = invert_transform(&f, C::new(0.0, 5.0), C::new(1.0, 1.0), 1e-14).unwrap();
        assert!((r.preimage - C::new(0.0, 4.0)).norm() < 1e-14);
    }

    #[test]
    fn continuation_from_anchor() {
        let f = TransformHandle::f_closed(|z| z - 1.0 / z);
        let target = C::new(0.3, 0.05);
        let r = invert_continued(&f, target).unwrap();
        assert!(r.preimage.im > 0.0);
        assert!((f.eval(r.preimage).unwrap() - target).norm() < 1e-12);
    }

    #[test]
    fn ladder_validation() {
        let f = TransformHandle::f_closed(|z| z);
        assert!(recover_line(&f, &[0.0], &[1e-3, 1e-2]).is_err());
    }
}
