//! Additive convolutions on the line and multiplicative convolutions on the
//! circle: Boolean (closed form), monotone (composition), free (subordination
//! fixed point), their powers, subordination distributions and the
//! Belinschi–Nica semigroups.
//!
//! Free multiplicative operations on Boolean infinitely divisible measures
//! are computed by unwrapping to class 𝓛, convolving on the line and
//! wrapping back.

use std::f64::consts::TAU;
use std::sync::{Arc, Mutex};

use num_complex::Complex64;

use crate::class_l::{classl_f, ClassLDescriptor};
use crate::error::{Error, Result};
use crate::measures::{CircleMeasure, MeasureProfile};
use crate::transforms::{
    invert_continued, invert_transform, default_tol, Provenance, MAX_STEP_HALVINGS, TransformHandle, TransformKind, C, ETA_ANCHOR,
    F_ANCHOR,
};
use crate::wrapping::{principal_arg, unwrap_descriptor, wrap_descriptor, wrap_handle, BooleanIDDescriptor};

/// Relative step size at which the subordination iteration stops.
pub const FIXED_POINT_TOL: f64 = 1e-13;
pub const FIXED_POINT_MAX_ITER: usize = 10_000;

/// Worst-case iteration statistics gathered while a handle is evaluated.
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct Diagnostics {
    pub max_iterations: usize,
    pub max_residual: f64,
}

#[derive(Debug, Default)]
struct DiagCell(Mutex<Diagnostics>);

impl DiagCell {
    fn record(&self, iterations: usize, residual: f64) {
        let mut d = self.0.lock().unwrap_or_else(|p| p.into_inner());
        d.max_iterations = d.max_iterations.max(iterations);
        d.max_residual = d.max_residual.max(residual);
    }

    fn get(&self) -> Diagnostics {
        *self.0.lock().unwrap_or_else(|p| p.into_inner())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum ClosedForm {
    ClassL(ClassLDescriptor),
    BooleanId(BooleanIDDescriptor),
}

/// A convolution output: an evaluator plus optional exact descriptor.
///
/// Circle results computed through the line keep the underlying `F`-handle
/// in `line`, so later operations can reuse the same lift.
#[derive(Debug, Clone)]
pub struct ConvolutionResult {
    pub handle: TransformHandle,
    pub closed_form: Option<ClosedForm>,
    pub line: Option<TransformHandle>,
    diag: Arc<DiagCell>,
}

impl ConvolutionResult {
    fn from_handle(handle: TransformHandle, diag: Arc<DiagCell>) -> Self {
        ConvolutionResult { handle, closed_form: None, line: None, diag }
    }

    pub fn diagnostics(&self) -> Diagnostics {
        self.diag.get()
    }

    /// Wraps a line result onto the circle, keeping the lift.
    fn wrapped(self) -> Result<Self> {
        let eta = wrap_handle(&self.handle)?;
        let closed_form = self.closed_form.map(|c| match c {
            ClosedForm::ClassL(d) => ClosedForm::BooleanId(wrap_descriptor(&d)),
            other => other,
        });
        Ok(ConvolutionResult { handle: eta, closed_form, line: Some(self.handle), diag: self.diag })
    }
}

/// Iterates `w ↦ map(w)` from `w0` in `ℂ⁺` until the step drops below
/// [`FIXED_POINT_TOL`] (relative to `max(1, |w|)`). When the iteration
/// contracts slowly a Newton step on `map(w) − w` is tried and kept only if
/// it lowers the fixed-point residual.
pub fn solve_fixed_point(map: &dyn Fn(C) -> Result<C>, w0: C) -> Result<(C, usize, f64)> {
    let mut w = w0;
    let mut prev = f64::INFINITY;
    let mut step = f64::INFINITY;
    for it in 1..=FIXED_POINT_MAX_ITER {
        let fw = map(w)?;
        step = (fw - w).norm();
        if step < FIXED_POINT_TOL * w.norm().max(1.0) {
            return Ok((fw, it, step));
        }
        let mut next = fw;
        if it > 3 && step > 0.5 * prev {
            let h = (1e-7 * w.norm().max(1.0)).min(0.25 * w.im);
            if h > 0.0 {
                if let (Ok(a), Ok(b)) = (map(w + h), map(w - h)) {
                    let d = (a - b) / (2.0 * h) - 1.0;
                    if d.norm() > 0.0 {
                        let delta = -(fw - w) / d;
                        let mut lambda = 1.0;
                        for _ in 0..=MAX_STEP_HALVINGS {
                            let wn = w + lambda * delta;
                            if wn.im > 0.0 {
                                if let Ok(fwn) = map(wn) {
                                    if (fwn - wn).norm() < step {
                                        next = wn;
                                        break;
                                    }
                                }
                            }
                            lambda *= 0.5;
                        }
                    }
                }
            }
        }
        prev = step;
        w = next;
    }
    Err(Error::FixedPointStall { step })
}

fn require(h: &TransformHandle, kind: TransformKind) -> Result<()> {
    if h.kind() == kind {
        Ok(())
    } else {
        Err(Error::KindMismatch)
    }
}

/// `(β1 + β2, σ1 + σ2)`.
pub fn boolean_add(d1: &ClassLDescriptor, d2: &ClassLDescriptor) -> ClassLDescriptor {
    ClassLDescriptor::new(d1.beta + d2.beta, d1.sigma.add(&d2.sigma)).expect("finite beta")
}

/// `(tβ, tσ)` for `t ≥ 0`.
pub fn boolean_power(d: &ClassLDescriptor, t: f64) -> Result<ClassLDescriptor> {
    ClassLDescriptor::new(t * d.beta, d.sigma.scale(t)?)
}

/// `F(z) = z + (F1(z) − z) + (F2(z) − z)` on handles.
pub fn boolean_add_handles(h1: &TransformHandle, h2: &TransformHandle) -> Result<TransformHandle> {
    require(h1, TransformKind::F)?;
    require(h2, TransformKind::F)?;
    let (a, b) = (h1.clone(), h2.clone());
    Ok(TransformHandle::new(TransformKind::F, Provenance::Composed, move |z| Ok(a.eval(z)? + b.eval(z)? - z))
        .with_flags(h1.periodic_shift && h2.periodic_shift, false))
}

/// `F(z) = z + t(F(z) − z)` on handles, `t ≥ 0`.
pub fn boolean_power_handle(h: &TransformHandle, t: f64) -> Result<TransformHandle> {
    require(h, TransformKind::F)?;
    if t < 0.0 {
        return Err(Error::NegativeMass);
    }
    let a = h.clone();
    Ok(TransformHandle::new(TransformKind::F, Provenance::Composed, move |z| Ok(z + t * (a.eval(z)? - z)))
        .with_flags(h.periodic_shift, false))
}

/// `(γ1γ2, σ1 + σ2)`.
pub fn mult_boolean(b1: &BooleanIDDescriptor, b2: &BooleanIDDescriptor) -> BooleanIDDescriptor {
    BooleanIDDescriptor { gamma: b1.gamma * b2.gamma, sigma: b1.sigma.add(&b2.sigma) }
}

/// `(e^{it(Arg γ + 2πk)}, tσ)`.
pub fn mult_boolean_power(b: &BooleanIDDescriptor, t: f64, branch: i64) -> Result<BooleanIDDescriptor> {
    let phase = t * (principal_arg(b.gamma) + TAU * branch as f64);
    Ok(BooleanIDDescriptor { gamma: Complex64::from_polar(1.0, phase), sigma: b.sigma.scale(t)? })
}

/// `η(z) = z (η1(z)/z)(η2(z)/z)` on handles.
pub fn mult_boolean_handles(h1: &TransformHandle, h2: &TransformHandle) -> Result<TransformHandle> {
    require(h1, TransformKind::Eta)?;
    require(h2, TransformKind::Eta)?;
    let (a, b) = (h1.clone(), h2.clone());
    let at_zero = h1.derivative(C::new(0.0, 0.0))? * h2.derivative(C::new(0.0, 0.0))?;
    Ok(TransformHandle::new(TransformKind::Eta, Provenance::Composed, move |z| {
        if z.norm() == 0.0 {
            return Ok(C::new(0.0, 0.0));
        }
        Ok(a.eval(z)? * b.eval(z)? / z)
    })
    .with_derivative({
        let (a, b) = (h1.clone(), h2.clone());
        move |z| {
            if z.norm() < 1e-300 {
                return Ok(at_zero);
            }
            let (ea, eb) = (a.eval(z)?, b.eval(z)?);
            Ok((a.derivative(z)? * eb + ea * b.derivative(z)?) / z - ea * eb / (z * z))
        }
    })
    .with_flags(false, h1.vanishes_only_at_zero && h2.vanishes_only_at_zero))
}

/// Monotone convolution: `a1 ∘ a2` for handles of the same kind.
pub fn monotone_compose(a1: &TransformHandle, a2: &TransformHandle) -> Result<TransformHandle> {
    a1.compose(a2)
}

/// Free additive convolution by subordination.
///
/// `ω₁(z)` is the fixed point of `w ↦ z + h₂(z + h₁(w))` with `h = F − id`,
/// iterated from `w = z`; then `F_{μ⊞ν}(z) = F₁(ω₁(z))`.
pub fn free_add(h1: &TransformHandle, h2: &TransformHandle) -> Result<ConvolutionResult> {
    require(h1, TransformKind::F)?;
    require(h2, TransformKind::F)?;
    let diag = Arc::new(DiagCell::default());
    let (a, b, cell) = (h1.clone(), h2.clone(), diag.clone());
    let handle = TransformHandle::new(TransformKind::F, Provenance::FixedPoint, move |z| {
        if z.im <= 0.0 {
            return Err(Error::LeftDomain);
        }
        let map = |w: C| -> Result<C> {
            let u = z + a.eval(w)? - w;
            Ok(z + b.eval(u)? - u)
        };
        let (w, it, step) = solve_fixed_point(&map, z)?;
        cell.record(it, step);
        a.eval(w)
    })
    .with_flags(h1.periodic_shift && h2.periodic_shift, false);
    Ok(ConvolutionResult::from_handle(handle, diag))
}

/// Subordination function `ω` of the free power `μ^{⊞t}`: `F_t = F ∘ ω`.
///
/// For `t ≥ 1`, `ω(z)` is the fixed point of `w ↦ z/t + (1 − 1/t)F(w)`.
/// For `0 < t < 1` (defined only where the measure exists) `ω(z)` solves
/// `tω + (1 − t)F(ω) = z`, obtained by Newton continuation.
fn free_power_omega(h: &TransformHandle, t: f64, z: C, cell: &DiagCell) -> Result<C> {
    if z.im <= 0.0 {
        return Err(Error::LeftDomain);
    }
    if t >= 1.0 {
        let map = |w: C| -> Result<C> { Ok(z / t + (1.0 - 1.0 / t) * h.eval(w)?) };
        let (w, it, step) = solve_fixed_point(&map, z)?;
        cell.record(it, step);
        Ok(w)
    } else {
        let a = h.clone();
        let g = TransformHandle::new(TransformKind::F, Provenance::Composed, move |v| Ok(t * v + (1.0 - t) * a.eval(v)?));
        let r = invert_continued(&g, z)?;
        cell.record(r.iterations, r.residual);
        Ok(r.preimage)
    }
}

/// Free additive power `μ^{⊞t}`, `t > 0`.
pub fn free_power(h: &TransformHandle, t: f64) -> Result<ConvolutionResult> {
    require(h, TransformKind::F)?;
    if !(t > 0.0) {
        return Err(Error::InvalidArgument("free power needs t > 0".into()));
    }
    let diag = Arc::new(DiagCell::default());
    let (a, cell) = (h.clone(), diag.clone());
    let prov = if t >= 1.0 { Provenance::FixedPoint } else { Provenance::Inversion };
    let handle = TransformHandle::new(TransformKind::F, prov, move |z| {
        let w = free_power_omega(&a, t, z, &cell)?;
        a.eval(w)
    })
    .with_flags(h.periodic_shift, false);
    Ok(ConvolutionResult::from_handle(handle, diag))
}

/// Mass of `σ` when it is a multiple of Haar measure, i.e. `F` is affine.
fn haar_mass(d: &ClassLDescriptor) -> Option<f64> {
    let s = &d.sigma;
    (s.atoms().is_empty() && s.fourier().cn.iter().all(|c| c.norm() == 0.0)).then(|| s.fourier().c0)
}

/// `μ1 ⊠ μ2` for Boolean infinitely divisible measures, via unwrapping at branch 0.
pub fn mult_free(b1: &BooleanIDDescriptor, b2: &BooleanIDDescriptor) -> Result<ConvolutionResult> {
    let (d1, d2) = (unwrap_descriptor(b1, 0), unwrap_descriptor(b2, 0));
    let mut r = free_add(&classl_f(&d1), &classl_f(&d2))?;
    if let (Some(c1), Some(c2)) = (haar_mass(&d1), haar_mass(&d2)) {
        let sigma = CircleMeasure::haar(c1 + c2)?;
        r.closed_form = Some(ClosedForm::ClassL(ClassLDescriptor::new(d1.beta + d2.beta, sigma)?));
    }
    r.wrapped()
}

/// `⊠` of two lifted measures given by their class-𝓛 `F`-handles.
pub fn mult_free_lifted(f1: &TransformHandle, f2: &TransformHandle) -> Result<ConvolutionResult> {
    free_add(f1, f2)?.wrapped()
}

/// `μ^{⊠t}` at the given unwrap branch.
pub fn mult_free_power(b: &BooleanIDDescriptor, t: f64, branch: i64) -> Result<ConvolutionResult> {
    let d = unwrap_descriptor(b, branch);
    let mut r = free_power(&classl_f(&d), t)?;
    if let Some(c) = haar_mass(&d) {
        r.closed_form = Some(ClosedForm::ClassL(ClassLDescriptor::new(t * d.beta, CircleMeasure::haar(t * c)?)?));
    }
    r.wrapped()
}

/// `⊠`-power of a lifted measure.
pub fn mult_free_power_lifted(f: &TransformHandle, t: f64) -> Result<ConvolutionResult> {
    free_power(f, t)?.wrapped()
}

fn vertical_path(z: C) -> Vec<C> {
    let top = z.im.max(F_ANCHOR);
    let n = ((top / z.im).ln() / 2f64.ln()).ceil().max(1.0) as usize;
    (0..=n).map(|k| C::new(z.re, top * (z.im / top).powf(k as f64 / n as f64))).collect()
}

fn radial_path(w: C) -> Vec<C> {
    let rho = w.norm();
    let r0 = rho.min(ETA_ANCHOR);
    let n = ((rho / r0).ln() / 1.2f64.ln()).ceil().max(1.0) as usize;
    (0..=n).map(|k| w * (r0 / rho) * (rho / r0).powf(k as f64 / n as f64)).collect()
}

/// Solves `t(v) = g(s)` for `s` running along `path`, continuing the
/// preimage from `seed` and bisecting steps that fail.
fn invert_following(t: &TransformHandle, g: &dyn Fn(C) -> Result<C>, path: &[C], seed: C) -> Result<(C, usize, f64)> {
    fn step(
        t: &TransformHandle,
        g: &dyn Fn(C) -> Result<C>,
        from: C,
        to: C,
        seed: C,
        depth: usize,
    ) -> Result<(C, usize, f64)> {
        let target = g(to)?;
        match invert_transform(t, target, seed, default_tol(target)) {
            Ok(r) => Ok((r.preimage, r.iterations, r.residual)),
            Err(e) if depth >= 24 || from == to => Err(e),
            Err(_) => {
                let mid = 0.5 * (from + to);
                let (s, _, _) = step(t, g, from, mid, seed, depth + 1)?;
                step(t, g, mid, to, s, depth + 1)
            }
        }
    }
    let mut v = seed;
    let mut out = (seed, 0, 0.0);
    for pair in path.windows(2) {
        out = step(t, g, pair[0], pair[1], v, 0)?;
        v = out.0;
    }
    if path.len() == 1 {
        out = step(t, g, path[0], path[0], v, 0)?;
    }
    Ok(out)
}

/// Subordination distribution `μ ⊞→ ν` on the line: `F = F_ν⁻¹ ∘ F_{μ⊞ν}`,
/// continued along the vertical path from `Re z + 10³i` down to `z`.
pub fn subordination_dist_line(mu: &TransformHandle, nu: &TransformHandle) -> Result<ConvolutionResult> {
    let conv = free_add(mu, nu)?;
    let diag = conv.diag.clone();
    let (fnu, fsum, cell) = (nu.clone(), conv.handle.clone(), diag.clone());
    let handle = TransformHandle::new(TransformKind::F, Provenance::Inversion, move |z| {
        if z.im <= 0.0 {
            return Err(Error::LeftDomain);
        }
        let path = vertical_path(z);
        let u0 = fsum.eval(path[0])?;
        let seed = u0 - (fnu.eval(u0)? - u0);
        let g = |s: C| fsum.eval(s);
        let (v, it, res) = invert_following(&fnu, &g, &path, seed)?;
        cell.record(it, res);
        Ok(v)
    })
    .with_flags(mu.periodic_shift && nu.periodic_shift, false);
    Ok(ConvolutionResult::from_handle(handle, diag))
}

/// Subordination distribution `μ ⊠→ ν` on the circle: `η = η_ν⁻¹ ∘ η_{μ⊠ν}`,
/// continued along the radial path from radius `10⁻³`.
pub fn subordination_dist_circle(mu: &BooleanIDDescriptor, nu: &BooleanIDDescriptor) -> Result<ConvolutionResult> {
    let conv = mult_free(mu, nu)?;
    subordination_from_eta(&conv.handle, &nu.to_handle(), conv.diag.clone())
}

/// `η_ν⁻¹ ∘ η_prod` for generic disk handles.
pub fn subordination_eta(eta_prod: &TransformHandle, eta_nu: &TransformHandle) -> Result<ConvolutionResult> {
    subordination_from_eta(eta_prod, eta_nu, Arc::new(DiagCell::default()))
}

fn subordination_from_eta(prod: &TransformHandle, nu: &TransformHandle, diag: Arc<DiagCell>) -> Result<ConvolutionResult> {
    require(prod, TransformKind::Eta)?;
    require(nu, TransformKind::Eta)?;
    let dnu = nu.derivative(C::new(0.0, 0.0))?;
    if dnu.norm() < 1e-12 {
        return Err(Error::EtaDerivativeZero);
    }
    let dprod = prod.derivative(C::new(0.0, 0.0))?;
    let (p, n, cell) = (prod.clone(), nu.clone(), diag.clone());
    let handle = TransformHandle::new(TransformKind::Eta, Provenance::Inversion, move |w| {
        if w.norm() == 0.0 {
            return Ok(C::new(0.0, 0.0));
        }
        if w.norm() >= 1.0 {
            return Err(Error::LeftDomain);
        }
        let path = radial_path(w);
        let seed = dprod * path[0] / dnu;
        let g = |s: C| p.eval(s);
        let (v, it, res) = invert_following(&n, &g, &path, seed)?;
        cell.record(it, res);
        Ok(v)
    })
    .with_flags(false, true);
    Ok(ConvolutionResult::from_handle(handle, diag))
}

/// Belinschi–Nica map on the line: `F(z) = z + (F_{μ^{⊞(1+t)}}(z) − z)/(1 + t)`.
pub fn belinschi_nica_line(h: &TransformHandle, t: f64) -> Result<ConvolutionResult> {
    require(h, TransformKind::F)?;
    if t < 0.0 {
        return Err(Error::InvalidArgument("Belinschi–Nica parameter must be nonnegative".into()));
    }
    if t == 0.0 {
        return Ok(ConvolutionResult::from_handle(h.clone(), Arc::new(DiagCell::default())));
    }
    let pow = free_power(h, 1.0 + t)?;
    let inner = pow.handle.clone();
    let handle = TransformHandle::new(TransformKind::F, Provenance::FixedPoint, move |z| {
        Ok(z + (inner.eval(z)? - z) / (1.0 + t))
    })
    .with_flags(h.periodic_shift, false);
    Ok(ConvolutionResult::from_handle(handle, pow.diag))
}

/// Multiplicative Belinschi–Nica map `𝔐_t = W ∘ 𝔅_t ∘ W⁻¹` at the given unwrap branch.
pub fn belinschi_nica_circle(b: &BooleanIDDescriptor, t: f64, branch: i64) -> Result<ConvolutionResult> {
    let d = unwrap_descriptor(b, branch);
    let mut r = belinschi_nica_line(&classl_f(&d), t)?;
    if t == 0.0 || haar_mass(&d).is_some() {
        r.closed_form = Some(ClosedForm::ClassL(d));
    }
    r.wrapped()
}

/// `𝔐_t` applied to a lifted measure.
pub fn belinschi_nica_lifted(f: &TransformHandle, t: f64) -> Result<ConvolutionResult> {
    belinschi_nica_line(f, t)?.wrapped()
}

/// Boolean convolution of descriptors, wrapped: equals `mult_boolean` of the wraps.
pub fn wrapped_boolean_add(d1: &ClassLDescriptor, d2: &ClassLDescriptor) -> BooleanIDDescriptor {
    wrap_descriptor(&boolean_add(d1, d2))
}

/// Total-variation distance between two circle profiles sampled on the same grid.
pub fn total_variation(a: &MeasureProfile, b: &MeasureProfile) -> f64 {
    let pts = a.density_grid.len().min(b.density_grid.len());
    let mut diff = 0.0;
    for k in 0..pts.saturating_sub(1) {
        let (x0, x1) = (a.density_grid[k].abscissa, a.density_grid[k + 1].abscissa);
        let d0 = (a.density_grid[k].density - b.density_grid[k].density).abs();
        let d1 = (a.density_grid[k + 1].density - b.density_grid[k + 1].density).abs();
        diff += 0.5 * (d0 + d1) * (x1 - x0);
    }
    let mut atoms: Vec<(f64, f64)> = a.atoms.iter().map(|x| (x.at, x.weight)).collect();
    for y in &b.atoms {
        match atoms.iter_mut().find(|p| (p.0 - y.at).abs() < 1e-9) {
            Some(p) => p.1 -= y.weight,
            None => atoms.push((y.at, -y.weight)),
        }
    }
    0.5 * (diff + atoms.iter().map(|p| p.1.abs()).sum::<f64>())
}
