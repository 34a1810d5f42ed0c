//! Lévy–Khinchin builders for the infinitely divisible families, the
//! Bercovici–Pata pair map from line to circle, monotone flows and the
//! multiplicative Burgers (radial Loewner) residual.

use std::f64::consts::TAU;
use std::sync::Arc;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::class_l::ClassLDescriptor;
use crate::convolutions::belinschi_nica_circle;
use crate::error::{Error, Result};
use crate::measures::{reduce_angle, CircleAtom, CircleMeasure, Domain, FourierDensity, GridPoint, MeasureProfile, RealAtom, RealAtomicMeasure};
use crate::numerics::{cot, extrapolate_to_zero};
use crate::transforms::{invert_continued, Provenance, TransformHandle, TransformKind, C, DEFAULT_LADDER};
use crate::wrapping::{principal_arg, BooleanIDDescriptor};

/// Default RK4 step for the monotone flows.
pub const ODE_STEP: f64 = 1e-3;
pub const MAX_ODE_HALVINGS: usize = 20;
/// Default number of Fourier modes for classical circle densities.
pub const CLASSICAL_MODES: usize = 256;
/// Agreement required between the two evaluations of `β`.
pub const BETA_CONSISTENCY: f64 = 1e-8;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum IdKind {
    Boolean,
    Free,
    Monotone,
    Classical,
}

impl std::str::FromStr for IdKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "boolean" => Ok(IdKind::Boolean),
            "free" => Ok(IdKind::Free),
            "monotone" => Ok(IdKind::Monotone),
            "classical" => Ok(IdKind::Classical),
            other => Err(Error::InvalidArgument(format!("unknown kind {other:?}"))),
        }
    }
}

/// A Lévy–Khinchin pair `(α, τ)` on the line with finitely many atoms.
///
/// With `periodic` set, `τ` stands for its 2π-periodization
/// `Σ_k (1 + x²)/(1 + (x + 2πk)²) τ({x}) δ_{x + 2πk}`, whose Boolean image lies in class 𝓛.
#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
pub struct CanonicalPairR {
    pub alpha: f64,
    pub tau: RealAtomicMeasure,
    #[serde(default)]
    pub periodic: bool,
}

impl CanonicalPairR {
    pub fn new(alpha: f64, tau: RealAtomicMeasure) -> Self {
        CanonicalPairR { alpha, tau, periodic: false }
    }

    pub fn periodized(alpha: f64, tau: RealAtomicMeasure) -> Self {
        CanonicalPairR { alpha, tau, periodic: true }
    }

    /// `I(z) = ∫ (1 + xz)/(x − z) dτ(x)`.
    pub fn kernel_integral(&self, z: C) -> C {
        let mut s = C::new(0.0, 0.0);
        for a in self.tau.atoms() {
            if self.periodic {
                let c = (1.0 + a.x * a.x) * a.w;
                s += 0.5 * c * (half_cot(a.x, z) - half_cot(a.x, C::i()).re);
            } else {
                s += a.w * (1.0 + a.x * z) / (a.x - z);
            }
        }
        s
    }

    /// `I'(z)`.
    pub fn kernel_derivative(&self, z: C) -> C {
        let mut s = C::new(0.0, 0.0);
        for a in self.tau.atoms() {
            if self.periodic {
                let c = (1.0 + a.x * a.x) * a.w;
                let k = half_cot(a.x, z);
                s += 0.25 * c * (1.0 + k * k);
            } else {
                let d = a.x - z;
                s += a.w * (1.0 + a.x * a.x) / (d * d);
            }
        }
        s
    }
}

fn half_cot(x: f64, z: C) -> C {
    cot((C::new(x, 0.0) - z) / 2.0)
}

/// A semigroup generator: `Φ` on `ℂ⁺` (additive) or `A` on `𝔻` (multiplicative).
#[derive(Clone)]
pub struct GeneratorHandle {
    pub kind: TransformKind,
    eval: Arc<dyn Fn(C) -> C + Send + Sync>,
}

impl std::fmt::Debug for GeneratorHandle {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("GeneratorHandle").field("kind", &self.kind).finish()
    }
}

impl GeneratorHandle {
    pub fn eval(&self, z: C) -> C {
        (self.eval)(z)
    }

    /// `Φ(z) = −α + ∫ (1 + xz)/(x − z) dτ`.
    pub fn additive(pair: &CanonicalPairR) -> Self {
        let p = pair.clone();
        GeneratorHandle { kind: TransformKind::F, eval: Arc::new(move |z| -p.alpha + p.kernel_integral(z)) }
    }

    /// `Φ⁺(z) = −i Φ×(e^{iz}) = −β + i ∫ (1 + ζe^{iz})/(1 − ζe^{iz}) dσ`, 2π-periodic.
    pub fn additive_from_circle(beta: f64, sigma: &CircleMeasure) -> Self {
        let d = ClassLDescriptor::new(beta, sigma.clone()).expect("finite beta");
        GeneratorHandle { kind: TransformKind::F, eval: Arc::new(move |z| d.f_disk((C::i() * z).exp())) }
    }

    /// `A(z) = z(−iβ − ∫ (1 + ζz)/(1 − ζz) dσ)`.
    pub fn multiplicative(beta: f64, sigma: &CircleMeasure) -> Self {
        let s = sigma.clone();
        GeneratorHandle {
            kind: TransformKind::Eta,
            eval: Arc::new(move |z| z * (C::new(0.0, -beta) - s.caratheodory(z))),
        }
    }
}

fn in_region(kind: TransformKind, z: C) -> bool {
    match kind {
        TransformKind::F => z.im > 0.0 && z.re.is_finite() && z.im.is_finite(),
        TransformKind::Eta => z.norm() < 1.0,
    }
}

/// Integrates `dz/dt = g(z)` from `z0` over `[0, t_end]` with classical RK4.
///
/// A step whose stages leave the domain is retried with half the step, at
/// most [`MAX_ODE_HALVINGS`] times.
pub fn rk4_flow(g: &GeneratorHandle, z0: C, t_end: f64, step: f64) -> Result<C> {
    if !(step > 0.0) || t_end < 0.0 {
        return Err(Error::InvalidArgument("flow needs step > 0 and t ≥ 0".into()));
    }
    let kind = g.kind;
    let mut z = z0;
    let mut t = 0.0;
    let n = (t_end / step).round() as usize;
    let mut remaining = n;
    let base = if n > 0 { t_end / n as f64 } else { 0.0 };
    while remaining > 0 {
        let mut h = base;
        let mut sub = 1usize;
        let mut halvings = 0;
        let advanced = loop {
            match rk4_steps(g, kind, z, h, sub) {
                Some(v) => break v,
                None if halvings < MAX_ODE_HALVINGS => {
                    halvings += 1;
                    h *= 0.5;
                    sub *= 2;
                }
                None => return Err(Error::OdeStepRejected { t }),
            }
        };
        z = advanced;
        t += base;
        remaining -= 1;
    }
    Ok(z)
}

fn rk4_steps(g: &GeneratorHandle, kind: TransformKind, mut z: C, h: f64, count: usize) -> Option<C> {
    for _ in 0..count {
        let k1 = g.eval(z);
        let z2 = z + 0.5 * h * k1;
        if !in_region(kind, z2) {
            return None;
        }
        let k2 = g.eval(z2);
        let z3 = z + 0.5 * h * k2;
        if !in_region(kind, z3) {
            return None;
        }
        let k3 = g.eval(z3);
        let z4 = z + h * k3;
        if !in_region(kind, z4) {
            return None;
        }
        let k4 = g.eval(z4);
        let zn = z + h / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
        if !in_region(kind, zn) || !zn.re.is_finite() || !zn.im.is_finite() {
            return None;
        }
        z = zn;
    }
    Some(z)
}

/// Characteristic function of a classical infinitely divisible law on the line.
#[derive(Debug, Clone, PartialEq)]
pub struct CharFunction {
    pair: CanonicalPairR,
}

impl CharFunction {
    /// `exp(iαt + ∫ (e^{ixt} − 1 − ixt/(1 + x²))(x² + 1)/x² dτ)`, with value `−t²/2` of the integrand at `x = 0`.
    pub fn eval(&self, t: f64) -> C {
        let mut s = C::new(0.0, self.pair.alpha * t);
        for a in self.pair.tau.atoms() {
            let x = a.x;
            if x == 0.0 {
                s += -0.5 * t * t * a.w;
            } else {
                let e = C::from_polar(1.0, x * t) - 1.0 - C::new(0.0, x * t / (1.0 + x * x));
                s += e * (x * x + 1.0) / (x * x) * a.w;
            }
        }
        s.exp()
    }

    /// Fourier coefficient `∫ ζ^p dW(μ) = φ(−p)` of the wrapped law.
    pub fn wrapped_coefficient(&self, p: i64) -> C {
        self.eval(-(p as f64))
    }
}

/// Output of an additive builder.
#[derive(Debug, Clone)]
pub enum AdditiveBuild {
    Transform(TransformHandle),
    Characteristic(CharFunction),
}

impl AdditiveBuild {
    pub fn transform(&self) -> Option<&TransformHandle> {
        match self {
            AdditiveBuild::Transform(h) => Some(h),
            AdditiveBuild::Characteristic(_) => None,
        }
    }
}

/// Boolean `F(z) = z − α + I(z)`.
pub fn additive_boolean(pair: &CanonicalPairR) -> TransformHandle {
    let (p, q) = (pair.clone(), pair.clone());
    TransformHandle::f_closed(move |z| z - p.alpha + p.kernel_integral(z))
        .with_derivative(move |z| Ok(1.0 + q.kernel_derivative(z)))
        .with_flags(pair.periodic, false)
}

/// Free `F`: the inverse of `z ↦ z + φ(z)` with `φ(z) = α − I(z)`.
pub fn additive_free(pair: &CanonicalPairR) -> TransformHandle {
    let (p, q) = (pair.clone(), pair.clone());
    let inv = TransformHandle::f_closed(move |w| w + p.alpha - p.kernel_integral(w))
        .with_derivative(move |w| Ok(1.0 - q.kernel_derivative(w)));
    TransformHandle::new(TransformKind::F, Provenance::Inversion, move |z| Ok(invert_continued(&inv, z)?.preimage))
        .with_flags(pair.periodic, false)
}

/// Monotone `F = F₁` for `∂F_t/∂t = Φ(F_t)`, `F₀ = id`.
pub fn additive_monotone(pair: &CanonicalPairR, step: f64) -> TransformHandle {
    monotone_flow_handle(GeneratorHandle::additive(pair), 1.0, step).with_flags(pair.periodic, false)
}

pub fn build_additive_id(kind: IdKind, pair: &CanonicalPairR) -> AdditiveBuild {
    match kind {
        IdKind::Boolean => AdditiveBuild::Transform(additive_boolean(pair)),
        IdKind::Free => AdditiveBuild::Transform(additive_free(pair)),
        IdKind::Monotone => AdditiveBuild::Transform(additive_monotone(pair, ODE_STEP)),
        IdKind::Classical => AdditiveBuild::Characteristic(CharFunction { pair: pair.clone() }),
    }
}

/// The time-`t` map of the flow generated by `g`, as a transform handle.
pub fn monotone_flow_handle(g: GeneratorHandle, t: f64, step: f64) -> TransformHandle {
    let kind = g.kind;
    let h = TransformHandle::new(kind, Provenance::Ode, move |z| {
        if !in_region(kind, z) {
            return Err(Error::LeftDomain);
        }
        rk4_flow(&g, z, t, step)
    });
    match kind {
        TransformKind::Eta => h.with_flags(false, true),
        TransformKind::F => h,
    }
}

/// Fourier coefficients `𝓕(p)` of a classical multiplicative law.
#[derive(Debug, Clone, PartialEq)]
pub struct FourierSeries {
    pub gamma: C,
    pub sigma: CircleMeasure,
}

impl FourierSeries {
    /// `γ^p exp(∫ (ζ^p − 1 − ip Im ζ)/(1 − Re ζ) dσ)`, integrand `−p²` at `ζ = 1`.
    pub fn coefficient(&self, p: i64) -> C {
        let pf = p as f64;
        let kernel = |th: f64| -> C {
            let th = reduce_angle(th);
            if th == 0.0 {
                return C::new(-pf * pf, 0.0);
            }
            (C::from_polar(1.0, pf * th) - 1.0 - C::new(0.0, pf * th.sin())) / (1.0 - th.cos())
        };
        let mut s = C::new(0.0, 0.0);
        for a in self.sigma.atoms() {
            s += a.mass * kernel(a.theta);
        }
        let f = self.sigma.fourier();
        if f.c0 != 0.0 || !f.cn.is_empty() {
            // The kernel is a trigonometric polynomial of degree ≤ |p|, so the rule is exact.
            let m = 2 * (p.unsigned_abs() as usize + f.cn.len() + 1);
            let mut acc = C::new(0.0, 0.0);
            for k in 0..m {
                let th = TAU * k as f64 / m as f64;
                acc += kernel(th) * self.sigma.density_at(th);
            }
            s += acc / m as f64;
        }
        let g = C::from_polar(1.0, pf * principal_arg(self.gamma));
        g * s.exp()
    }

    /// Density of `dμ(e^{iθ})` with respect to `dθ`, by Fourier summation over `|p| ≤ modes`.
    pub fn profile(&self, angles: &[f64], modes: usize) -> MeasureProfile {
        let coeffs: Vec<C> = (0..=modes as i64).map(|p| self.coefficient(p)).collect();
        let grid = angles
            .iter()
            .map(|&th| {
                let mut s = coeffs[0].re;
                for (p, c) in coeffs.iter().enumerate().skip(1) {
                    s += 2.0 * (c * C::from_polar(1.0, -(p as f64) * th)).re;
                }
                GridPoint { abscissa: th, density: s / TAU }
            })
            .collect();
        let tail = coeffs.last().map(|c| c.norm()).unwrap_or(0.0);
        MeasureProfile::new(
            Domain::Circle,
            Vec::new(),
            grid,
            format!("Fourier summation over |p| ≤ {modes}; |F(±{modes})| = {tail:.3e}"),
        )
    }
}

/// Output of a multiplicative builder.
#[derive(Debug, Clone)]
pub enum MultBuild {
    Boolean(BooleanIDDescriptor),
    Transform(TransformHandle),
    Fourier(FourierSeries),
}

impl MultBuild {
    /// The `η`-transform, when the kind has one.
    pub fn eta(&self) -> Option<TransformHandle> {
        match self {
            MultBuild::Boolean(b) => Some(b.to_handle()),
            MultBuild::Transform(h) => Some(h.clone()),
            MultBuild::Fourier(_) => None,
        }
    }
}

/// `η` of the free law with `Σ(z) = γ̄ exp(∫ (1 + ζz)/(1 − ζz) dσ)`: the
/// inverse of `w ↦ wΣ(w)`, by radial continuation.
pub fn mult_free_eta(b: &BooleanIDDescriptor) -> TransformHandle {
    let (s1, s2) = (b.sigma.clone(), b.sigma.clone());
    let g = b.gamma.conj();
    let w_sigma = TransformHandle::eta_closed(move |w| g * w * s1.caratheodory(w).exp())
        .with_derivative(move |w| Ok(g * s2.caratheodory(w).exp() * (1.0 + w * s2.caratheodory_derivative(w))));
    TransformHandle::new(TransformKind::Eta, Provenance::Inversion, move |z| {
        if z.norm() >= 1.0 {
            return Err(Error::LeftDomain);
        }
        Ok(invert_continued(&w_sigma, z)?.preimage)
    })
    .with_flags(false, true)
}

/// `Σ(z) = γ̄ exp(∫ (1 + ζz)/(1 − ζz) dσ)` of the free law with pair `(γ, σ)`.
pub fn mult_free_sigma(b: &BooleanIDDescriptor, z: C) -> C {
    b.gamma.conj() * b.sigma.caratheodory(z).exp()
}

/// `η₁` of the multiplicative monotone flow generated by `A^{β,σ}`.
pub fn mult_monotone(beta: f64, sigma: &CircleMeasure, step: f64) -> TransformHandle {
    monotone_flow_handle(GeneratorHandle::multiplicative(beta, sigma), 1.0, step)
}

/// Multiplicative builders. The monotone kind uses `β = −Arg γ`.
pub fn build_mult_id(kind: IdKind, pair: &BooleanIDDescriptor) -> MultBuild {
    match kind {
        IdKind::Boolean => MultBuild::Boolean(pair.clone()),
        IdKind::Free => MultBuild::Transform(mult_free_eta(pair)),
        IdKind::Monotone => MultBuild::Transform(mult_monotone(-principal_arg(pair.gamma), &pair.sigma, ODE_STEP)),
        IdKind::Classical => MultBuild::Fourier(FourierSeries { gamma: pair.gamma, sigma: pair.sigma.clone() }),
    }
}

/// Maps `(α, τ)` to the circle pair `(γ, σ)`.
///
/// Atoms `x ≠ 0` of `τ` with mass `m` give mass `(1 − cos x)(x² + 1)/x² · m`
/// at `e^{−ix}`, and `σ({1})` receives `τ({0})/2`. For periodized pairs each
/// atom gives mass `(1 + x²)τ({x})/2` at `e^{−ix}`.
pub fn bp_pair_map(pair: &CanonicalPairR) -> Result<BooleanIDDescriptor> {
    let mut atoms = Vec::new();
    let mut phase = -pair.alpha;
    for a in pair.tau.atoms() {
        let x = a.x;
        if pair.periodic {
            let c = (1.0 + x * x) * a.w;
            atoms.push(CircleAtom { theta: reduce_angle(-x), mass: 0.5 * c });
            phase -= 0.5 * c * half_cot(x, C::i()).re;
        } else if x == 0.0 {
            atoms.push(CircleAtom { theta: 0.0, mass: 0.5 * a.w });
        } else {
            let k = (x * x + 1.0) / (x * x);
            atoms.push(CircleAtom { theta: reduce_angle(-x), mass: (1.0 - x.cos()) * k * a.w });
            phase -= (x.sin() - x / (1.0 + x * x)) * k * a.w;
        }
    }
    let sigma = CircleMeasure::new(atoms, FourierDensity::default())?;
    BooleanIDDescriptor::new(C::from_polar(1.0, phase), sigma)
}

/// `β` from `−iα + iI(z) = −iβ − ∫ (1 + ζe^{iz})/(1 − ζe^{iz}) dσ`, solved at
/// `z = 10i` and checked at `z = 3 + 5i`.
pub fn bp_beta(pair: &CanonicalPairR, sigma: &CircleMeasure) -> Result<f64> {
    let solve = |z: C| -> C { pair.alpha - pair.kernel_integral(z) + C::i() * sigma.caratheodory((C::i() * z).exp()) };
    let b1 = solve(C::new(0.0, 10.0));
    let b2 = solve(C::new(3.0, 5.0));
    let gap = (b1 - b2).norm().max(b1.im.abs());
    if gap > BETA_CONSISTENCY {
        return Err(Error::Inconsistency(format!("β differs by {gap:.3e} between z = 10i and z = 3+5i")));
    }
    Ok(b1.re)
}

/// Residual of the identity `e^{−iα} exp(iI(z)) = γ exp(−∫ (1 + ζe^{iz})/(1 − ζe^{iz}) dσ)`.
pub fn sigma_tau_residual(pair: &CanonicalPairR, image: &BooleanIDDescriptor, z: C) -> f64 {
    let lhs = C::from_polar(1.0, -pair.alpha) * (C::i() * pair.kernel_integral(z)).exp();
    let rhs = image.gamma * (-image.sigma.caratheodory((C::i() * z).exp())).exp();
    (lhs - rhs).norm()
}

/// Detects the atoms `τ({2πk}) = lim iy φ(2πk + iy)/(1 + (2πk)²)`, `|k| ≤ 3`,
/// of `φ(z) = −(i/2)(1 + e^{iz})/(1 − e^{iz}) + 2πn`.
///
/// Returned as a plain list: the detected weights sum to more than one.
pub fn free_gaussian_preimage_check(n: i64) -> Vec<RealAtom> {
    let phi = |z: C| -> C {
        let e = (C::i() * z).exp();
        C::new(0.0, -0.5) * (1.0 + e) / (1.0 - e) + TAU * n as f64
    };
    (-3i64..=3)
        .map(|k| {
            let x = TAU * k as f64;
            let vals: Vec<C> = DEFAULT_LADDER.iter().map(|&y| C::new(0.0, y) * phi(C::new(x, y))).collect();
            let w = extrapolate_to_zero(&DEFAULT_LADDER, &vals).re / (1.0 + x * x);
            RealAtom { x, w }
        })
        .collect()
}

/// `|∂f/∂t − z log f ∂f/∂z|` for `f(t, z) = η_{𝔐_t(b)}(z)/z`, by central
/// differences of step `h` in `t` and `z`. `log f = i(F_t(ζ) − ζ)` with
/// `z = e^{iζ}`, continuous from `t = 0`.
pub fn loewner_residual(b: &BooleanIDDescriptor, t: f64, z: C, h: f64) -> Result<f64> {
    if !(t > 0.0) || !(h > 0.0) || h >= t {
        return Err(Error::InvalidArgument("loewner_residual needs 0 < h < t".into()));
    }
    if z.norm() >= 1.0 || z.norm() == 0.0 || z.norm() + h >= 1.0 {
        return Err(Error::LeftDomain);
    }
    let log_f = |s: f64, w: C| -> Result<C> {
        let r = belinschi_nica_circle(b, s, 0)?;
        let line = r.line.expect("circle result keeps its lift");
        let zeta = -C::i() * w.ln();
        Ok(C::i() * (line.eval(zeta)? - zeta))
    };
    let f = |s: f64, w: C| -> Result<C> { Ok(log_f(s, w)?.exp()) };
    let dt = (f(t + h, z)? - f(t - h, z)?) / (2.0 * h);
    let dz = (f(t, z + h)? - f(t, z - h)?) / (2.0 * h);
    Ok((dt - z * log_f(t, z)? * dz).norm())
}

/// Shortcut for the multiplicative free Gaussian pair `(1, ½δ₁)`.
pub fn free_gaussian_pair() -> BooleanIDDescriptor {
    BooleanIDDescriptor::new(Complex64::new(1.0, 0.0), CircleMeasure::point(0.0, 0.5).expect("valid"))
        .expect("unit gamma")
}

/// The periodized pair of `δ₀` with unit mass, whose free law wraps to the free Gaussian.
pub fn semicircle_preimage_pair() -> CanonicalPairR {
    CanonicalPairR::periodized(0.0, RealAtomicMeasure::from_pairs(&[(0.0, 1.0)]).expect("valid"))
}
