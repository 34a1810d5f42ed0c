//! The wrapping map `W`, which pushes a measure on the line to the circle by
//! `x ↦ e^{−ix}` (clockwise), both as a direct series on sampled measures and
//! as the exact map `(β, σ) ↦ (e^{−iβ}, σ)` on descriptors.

use std::f64::consts::{PI, TAU};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::class_l::{solve_atoms, ClassLDescriptor};
use crate::error::{Error, Result};
use crate::measures::{reduce_angle, CircleMeasure, Domain, GridPoint, MeasureProfile, ProfileAtom};
use crate::numerics::trigamma;
use crate::transforms::{circle_atom_weight, TransformHandle, TransformKind, C, DEFAULT_LADDER, REFINE_SCALE};

/// Minimum captured mass accepted by [`wrap_direct`].
pub const MIN_WRAP_MASS: f64 = 0.99;

#[derive(Deserialize)]
struct RawBooleanId {
    gamma: Complex64,
    #[serde(default)]
    sigma: CircleMeasure,
}

/// A Boolean infinitely divisible measure on the circle, given by `(γ, σ)`:
/// `η(z) = γ z exp(−∫ (1 + ζz)/(1 − ζz) dσ(ζ))`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawBooleanId")]
pub struct BooleanIDDescriptor {
    pub gamma: Complex64,
    pub sigma: CircleMeasure,
}

impl TryFrom<RawBooleanId> for BooleanIDDescriptor {
    type Error = Error;

    fn try_from(raw: RawBooleanId) -> Result<Self> {
        BooleanIDDescriptor::new(raw.gamma, raw.sigma)
    }
}

impl BooleanIDDescriptor {
    pub fn new(gamma: Complex64, sigma: CircleMeasure) -> Result<Self> {
        if (gamma.norm() - 1.0).abs() > 1e-12 {
            return Err(Error::InvalidArgument(format!("|gamma| = {} is not 1", gamma.norm())));
        }
        Ok(BooleanIDDescriptor { gamma, sigma })
    }

    /// The point mass at `γ`.
    pub fn point_mass(gamma: Complex64) -> Result<Self> {
        Self::new(gamma, CircleMeasure::zero())
    }

    pub fn eta_eval(&self, z: C) -> C {
        self.gamma * z * (-self.sigma.caratheodory(z)).exp()
    }

    pub fn eta_derivative(&self, z: C) -> C {
        let e = (-self.sigma.caratheodory(z)).exp();
        self.gamma * e * (1.0 - z * self.sigma.caratheodory_derivative(z))
    }

    /// `η'(0) = γ e^{−σ(𝕋)}`.
    pub fn eta_prime_zero(&self) -> C {
        self.gamma * (-self.sigma.total_mass()).exp()
    }

    /// The closed-form `η`-transform.
    pub fn to_handle(&self) -> TransformHandle {
        let (a, b) = (self.clone(), self.clone());
        TransformHandle::eta_closed(move |z| a.eta_eval(z))
            .with_derivative(move |z| Ok(b.eta_derivative(z)))
            .with_flags(false, true)
    }
}

/// `(β, σ) ↦ (e^{−iβ}, σ)`.
pub fn wrap_descriptor(d: &ClassLDescriptor) -> BooleanIDDescriptor {
    BooleanIDDescriptor { gamma: Complex64::from_polar(1.0, -d.beta), sigma: d.sigma.clone() }
}

/// Principal argument in `(−π, π]`.
pub fn principal_arg(g: Complex64) -> f64 {
    let a = g.arg();
    if a <= -PI {
        PI
    } else {
        a
    }
}

/// `(γ, σ) ↦ (−Arg γ + 2πn, σ)`.
pub fn unwrap_descriptor(b: &BooleanIDDescriptor, branch: i64) -> ClassLDescriptor {
    ClassLDescriptor::new(-principal_arg(b.gamma) + TAU * branch as f64, b.sigma.clone())
        .expect("finite beta")
}

/// `η(w) = exp(i F(−i log w))` for a 2π-equivariant `F`.
pub fn wrap_handle(f: &TransformHandle) -> Result<TransformHandle> {
    if f.kind() != TransformKind::F {
        return Err(Error::KindMismatch);
    }
    let g = f.clone();
    let eta = TransformHandle::new(TransformKind::Eta, f.provenance, move |w| {
        if w.norm() == 0.0 {
            return Ok(C::new(0.0, 0.0));
        }
        let z = -C::i() * w.ln();
        Ok((C::i() * g.eval(z)?).exp())
    });
    Ok(eta.with_flags(false, true))
}

/// Wraps a line profile onto the circle.
///
/// The circle profile is indexed by the angle θ of `e^{iθ}`; since the
/// wrapping is clockwise its density at θ is `Σ_m p(−θ + 2πm)`, summed over
/// `|m| ≤ M` plus an inverse-square tail correction fitted at `|m| = M`.
pub fn wrap_direct(profile: &MeasureProfile, angle_grid: &[f64], window: Option<usize>) -> Result<MeasureProfile> {
    if profile.domain != Domain::Line {
        return Err(Error::InvalidArgument("wrap_direct expects a line profile".into()));
    }
    if profile.captured_mass < MIN_WRAP_MASS {
        return Err(Error::InsufficientMass { captured: profile.captured_mass });
    }
    let extent = profile
        .density_grid
        .iter()
        .map(|g| g.abscissa.abs())
        .fold(0.0, f64::max);
    let m = window.unwrap_or_else(|| (extent / TAU).floor() as usize).max(1);
    let mut max_tail: f64 = 0.0;
    let grid = angle_grid
        .iter()
        .map(|&th| {
            let mut s = 0.0;
            for k in -(m as i64)..=(m as i64) {
                s += profile.density_at(-th + TAU * k as f64);
            }
            let xp = -th + TAU * m as f64;
            let xn = -th - TAU * m as f64;
            let cp = profile.density_at(xp) * xp * xp;
            let cn = profile.density_at(xn) * xn * xn;
            let shift = th / TAU;
            let tail = (cp * trigamma(m as f64 + 1.0 - shift) + cn * trigamma(m as f64 + 1.0 + shift)) / (TAU * TAU);
            max_tail = max_tail.max(tail);
            GridPoint { abscissa: th, density: s + tail }
        })
        .collect();
    let mut atoms: Vec<ProfileAtom> = Vec::new();
    for a in &profile.atoms {
        let th = reduce_angle(-a.at);
        match atoms.iter_mut().find(|b| angle_distance(b.at, th) < 1e-12) {
            Some(b) => b.weight += a.weight,
            None => atoms.push(ProfileAtom { at: th, weight: a.weight }),
        }
    }
    let note = format!(
        "wrapped with window M = {m}; inverse-square tail correction up to {max_tail:.3e}; source: {}",
        profile.truncation_note
    );
    Ok(MeasureProfile::new(Domain::Circle, atoms, grid, note))
}

fn angle_distance(a: f64, b: f64) -> f64 {
    let d = (a - b).rem_euclid(TAU);
    d.min(TAU - d)
}

/// A line atom, its circle image `e^{iθ}` with `θ = −x mod 2π`, and both weights.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AtomPair {
    pub x: f64,
    pub theta: f64,
    pub line_weight: f64,
    pub circle_weight: f64,
}

/// Pairs every solver atom with the residue of `η_{W(μ)}` at its image.
pub fn atom_correspondence(d: &ClassLDescriptor, window: usize) -> Result<Vec<AtomPair>> {
    if !d.sigma.is_purely_atomic() {
        if d.sigma.is_zero() {
            return Ok(vec![AtomPair {
                x: d.beta,
                theta: reduce_angle(-d.beta),
                line_weight: 1.0,
                circle_weight: 1.0,
            }]);
        }
        return Err(Error::InvalidArgument("atom_correspondence needs a purely atomic σ".into()));
    }
    let sol = solve_atoms(d, window)?;
    let eta = wrap_descriptor(d).to_handle();
    let thetas: Vec<f64> = d.sigma.atoms().iter().map(|a| a.theta).collect();
    let ladder: Vec<f64> = DEFAULT_LADDER.iter().map(|s| s * REFINE_SCALE).collect();
    sol.roots
        .iter()
        .map(|r| {
            // −x = θ_k − 2πm − offset, reduced without forming x.
            let theta = reduce_angle(thetas[r.pole_atom] - r.offset);
            let w = circle_atom_weight(&eta, theta, &ladder)?;
            Ok(AtomPair { x: r.x, theta, line_weight: r.weight, circle_weight: w.re })
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn point_mass_wraps_clockwise() {
        let b = wrap_descriptor(&ClassLDescriptor::point_mass(1.0));
        assert!((b.gamma - Complex64::from_polar(1.0, -1.0)).norm() < 1e-15);
    }

    #[test]
    fn principal_arg_range() {
        assert_eq!(principal_arg(Complex64::new(-1.0, -0.0)), PI);
        assert_eq!(principal_arg(Complex64::new(-1.0, 0.0)), PI);
    }
}
