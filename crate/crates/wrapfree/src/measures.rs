//! Finite measures on the circle and on the line, and sampled measure profiles.
//!
//! A [`CircleMeasure`] is a finite list of atoms plus a nonnegative
//! trigonometric polynomial density with respect to normalized angle
//! `dθ/2π`. Every integral of a Carathéodory kernel against such a measure
//! has a closed form, which is what the rest of the crate relies on.

use std::f64::consts::TAU;
use std::fmt::Write as _;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Number of angles used to certify positivity of a trigonometric density.
pub const POSITIVITY_GRID: usize = 4096;

/// A point mass on the circle at `e^{iθ}`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CircleAtom {
    pub theta: f64,
    pub mass: f64,
}

/// Fourier data of a density `c0 + 2 Re Σ c_n e^{inθ}`.
#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
pub struct FourierDensity {
    pub c0: f64,
    #[serde(default)]
    pub cn: Vec<Complex64>,
}

#[derive(Deserialize)]
struct RawCircleMeasure {
    #[serde(default)]
    atoms: Vec<CircleAtom>,
    #[serde(default)]
    fourier: FourierDensity,
}

/// Finite positive measure on the unit circle.
#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
#[serde(try_from = "RawCircleMeasure")]
pub struct CircleMeasure {
    atoms: Vec<CircleAtom>,
    fourier: FourierDensity,
}

impl TryFrom<RawCircleMeasure> for CircleMeasure {
    type Error = Error;

    fn try_from(raw: RawCircleMeasure) -> Result<Self> {
        CircleMeasure::new(raw.atoms, raw.fourier)
    }
}

impl CircleMeasure {
    /// Validates and normalizes a measure. Atoms at bit-identical angles are merged.
    pub fn new(atoms: Vec<CircleAtom>, fourier: FourierDensity) -> Result<Self> {
        for a in &atoms {
            if !a.theta.is_finite() || !a.mass.is_finite() {
                return Err(Error::InvalidMeasure("non-finite atom".into()));
            }
            if a.mass < 0.0 {
                return Err(Error::NegativeMass);
            }
            if !(0.0..TAU).contains(&a.theta) {
                return Err(Error::InvalidMeasure(format!(
                    "atom angle {} outside [0, 2π)",
                    a.theta
                )));
            }
        }
        if !fourier.c0.is_finite() || fourier.cn.iter().any(|c| !c.re.is_finite() || !c.im.is_finite()) {
            return Err(Error::InvalidMeasure("non-finite Fourier coefficient".into()));
        }
        if fourier.c0 < 0.0 {
            return Err(Error::NegativeMass);
        }
        let m = CircleMeasure { atoms: merge_atoms(atoms), fourier };
        if !m.fourier.cn.is_empty() {
            let min = (0..POSITIVITY_GRID)
                .map(|k| m.density_at(TAU * k as f64 / POSITIVITY_GRID as f64))
                .fold(f64::INFINITY, f64::min);
            if min < -1e-12 * (1.0 + m.fourier.c0) {
                return Err(Error::InvalidMeasure(format!(
                    "density takes negative value {min:.3e}"
                )));
            }
        }
        Ok(m)
    }

    pub fn zero() -> Self {
        Self::default()
    }

    /// A single atom at `e^{iθ}`; the angle is reduced to `[0, 2π)`.
    pub fn point(theta: f64, mass: f64) -> Result<Self> {
        Self::new(vec![CircleAtom { theta: reduce_angle(theta), mass }], FourierDensity::default())
    }

    /// Uniform (Haar) measure of total mass `mass`.
    pub fn haar(mass: f64) -> Result<Self> {
        Self::new(Vec::new(), FourierDensity { c0: mass, cn: Vec::new() })
    }

    /// Atoms given as `(θ, mass)` pairs, angles reduced to `[0, 2π)`.
    pub fn from_atoms(atoms: &[(f64, f64)]) -> Result<Self> {
        Self::new(
            atoms
                .iter()
                .map(|&(theta, mass)| CircleAtom { theta: reduce_angle(theta), mass })
                .collect(),
            FourierDensity::default(),
        )
    }

    /// Pure density part `c0 + 2 Re Σ c_n e^{inθ}`.
    pub fn from_fourier(c0: f64, cn: Vec<Complex64>) -> Result<Self> {
        Self::new(Vec::new(), FourierDensity { c0, cn })
    }

    pub fn atoms(&self) -> &[CircleAtom] {
        &self.atoms
    }

    pub fn fourier(&self) -> &FourierDensity {
        &self.fourier
    }

    pub fn atom_mass(&self) -> f64 {
        self.atoms.iter().map(|a| a.mass).sum()
    }

    pub fn total_mass(&self) -> f64 {
        self.atom_mass() + self.fourier.c0
    }

    pub fn is_zero(&self) -> bool {
        self.total_mass() == 0.0 && self.fourier.cn.iter().all(|c| c.norm_sqr() == 0.0)
    }

    pub fn has_density(&self) -> bool {
        self.fourier.c0 > 0.0
    }

    pub fn is_purely_atomic(&self) -> bool {
        !self.atoms.is_empty() && self.fourier.c0 == 0.0
    }

    /// Density value at `e^{iθ}` with respect to `dθ/2π`.
    pub fn density_at(&self, theta: f64) -> f64 {
        let w = Complex64::from_polar(1.0, theta);
        let mut acc = Complex64::new(0.0, 0.0);
        for c in self.fourier.cn.iter().rev() {
            acc = (acc + c) * w;
        }
        self.fourier.c0 + 2.0 * acc.re
    }

    /// `m_n = ∫ ζ^n dσ(ζ)`.
    pub fn moment(&self, n: usize) -> Complex64 {
        let atoms: Complex64 = self
            .atoms
            .iter()
            .map(|a| a.mass * Complex64::from_polar(1.0, n as f64 * a.theta))
            .sum();
        let dens = match n {
            0 => Complex64::new(self.fourier.c0, 0.0),
            _ => self.fourier.cn.get(n - 1).map(|c| c.conj()).unwrap_or_default(),
        };
        atoms + dens
    }

    /// `∫ (1 + ζw)/(1 − ζw) dσ(ζ)`.
    pub fn caratheodory(&self, w: Complex64) -> Complex64 {
        let mut out = Complex64::new(0.0, 0.0);
        for a in &self.atoms {
            let zw = Complex64::from_polar(1.0, a.theta) * w;
            out += a.mass * (1.0 + zw) / (1.0 - zw);
        }
        out + self.density_caratheodory(w)
    }

    /// Derivative in `w` of [`CircleMeasure::caratheodory`].
    pub fn caratheodory_derivative(&self, w: Complex64) -> Complex64 {
        let mut out = Complex64::new(0.0, 0.0);
        for a in &self.atoms {
            let zeta = Complex64::from_polar(1.0, a.theta);
            let d = 1.0 - zeta * w;
            out += 2.0 * a.mass * zeta / (d * d);
        }
        let mut acc = Complex64::new(0.0, 0.0);
        for (k, c) in self.fourier.cn.iter().enumerate().rev() {
            acc = acc * w + (k + 1) as f64 * c.conj();
        }
        out + 2.0 * acc
    }

    fn density_caratheodory(&self, w: Complex64) -> Complex64 {
        let mut acc = Complex64::new(0.0, 0.0);
        for c in self.fourier.cn.iter().rev() {
            acc = (acc + c.conj()) * w;
        }
        self.fourier.c0 + 2.0 * acc
    }

    /// Density part only: the measure with atoms removed.
    pub fn density_part(&self) -> CircleMeasure {
        CircleMeasure { atoms: Vec::new(), fourier: self.fourier.clone() }
    }

    pub fn add(&self, other: &CircleMeasure) -> CircleMeasure {
        circle_measure_add(self, other)
    }

    pub fn scale(&self, t: f64) -> Result<CircleMeasure> {
        circle_measure_scale(self, t)
    }
}

/// Sum of two circle measures; atoms at bit-identical angles merge.
pub fn circle_measure_add(a: &CircleMeasure, b: &CircleMeasure) -> CircleMeasure {
    let mut atoms = a.atoms.clone();
    atoms.extend_from_slice(&b.atoms);
    let n = a.fourier.cn.len().max(b.fourier.cn.len());
    let cn = (0..n)
        .map(|k| {
            a.fourier.cn.get(k).copied().unwrap_or_default()
                + b.fourier.cn.get(k).copied().unwrap_or_default()
        })
        .collect();
    CircleMeasure {
        atoms: merge_atoms(atoms),
        fourier: FourierDensity { c0: a.fourier.c0 + b.fourier.c0, cn },
    }
}

/// Multiplies every mass and coefficient by `t ≥ 0`.
pub fn circle_measure_scale(m: &CircleMeasure, t: f64) -> Result<CircleMeasure> {
    if t < 0.0 || t.is_nan() {
        return Err(Error::NegativeMass);
    }
    Ok(CircleMeasure {
        atoms: m.atoms.iter().map(|a| CircleAtom { theta: a.theta, mass: a.mass * t }).collect(),
        fourier: FourierDensity {
            c0: m.fourier.c0 * t,
            cn: m.fourier.cn.iter().map(|c| c * t).collect(),
        },
    })
}

/// `m_n = ∫ ζ^n dσ(ζ)`.
pub fn fourier_moment(m: &CircleMeasure, n: usize) -> Complex64 {
    m.moment(n)
}

fn merge_atoms(mut atoms: Vec<CircleAtom>) -> Vec<CircleAtom> {
    atoms.sort_by(|a, b| a.theta.total_cmp(&b.theta));
    let mut out: Vec<CircleAtom> = Vec::with_capacity(atoms.len());
    for a in atoms {
        match out.last_mut() {
            Some(last) if last.theta.to_bits() == a.theta.to_bits() => last.mass += a.mass,
            _ => out.push(a),
        }
    }
    out
}

/// Reduces an angle to `[0, 2π)`.
pub fn reduce_angle(theta: f64) -> f64 {
    let r = theta.rem_euclid(TAU);
    if r >= TAU {
        0.0
    } else {
        r
    }
}

/// A point mass on the real line.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RealAtom {
    pub x: f64,
    pub w: f64,
}

#[derive(Deserialize)]
struct RawRealAtomicMeasure {
    #[serde(default)]
    atoms: Vec<RealAtom>,
}

/// Finitely many atoms on the line with total weight at most one.
#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
#[serde(try_from = "RawRealAtomicMeasure")]
pub struct RealAtomicMeasure {
    atoms: Vec<RealAtom>,
}

impl TryFrom<RawRealAtomicMeasure> for RealAtomicMeasure {
    type Error = Error;

    fn try_from(raw: RawRealAtomicMeasure) -> Result<Self> {
        RealAtomicMeasure::new(raw.atoms)
    }
}

impl RealAtomicMeasure {
    pub fn new(mut atoms: Vec<RealAtom>) -> Result<Self> {
        for a in &atoms {
            if !a.x.is_finite() || !a.w.is_finite() {
                return Err(Error::InvalidMeasure("non-finite atom".into()));
            }
            if a.w < 0.0 {
                return Err(Error::NegativeMass);
            }
            if a.w > 1.0 {
                return Err(Error::InvalidMeasure(format!("atom weight {} exceeds 1", a.w)));
            }
        }
        atoms.sort_by(|a, b| a.x.total_cmp(&b.x));
        if atoms.windows(2).any(|p| p[0].x == p[1].x) {
            return Err(Error::InvalidMeasure("repeated atom location".into()));
        }
        let total: f64 = atoms.iter().map(|a| a.w).sum();
        if total > 1.0 + 1e-9 {
            return Err(Error::InvalidMeasure(format!("total weight {total} exceeds 1")));
        }
        Ok(RealAtomicMeasure { atoms })
    }

    pub fn from_pairs(pairs: &[(f64, f64)]) -> Result<Self> {
        Self::new(pairs.iter().map(|&(x, w)| RealAtom { x, w }).collect())
    }

    pub fn atoms(&self) -> &[RealAtom] {
        &self.atoms
    }

    pub fn total_weight(&self) -> f64 {
        self.atoms.iter().map(|a| a.w).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.atoms.is_empty()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Domain {
    Line,
    Circle,
}

/// An atom of a recovered measure. On the circle `at` is the angle θ of `e^{iθ}`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ProfileAtom {
    pub at: f64,
    pub weight: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GridPoint {
    pub abscissa: f64,
    pub density: f64,
}

/// A recovered measure: atoms, a sampled density and its mass accounting.
///
/// Circle profiles are indexed by the angle θ of the point `e^{iθ}`, with
/// density taken with respect to `dθ`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MeasureProfile {
    pub domain: Domain,
    pub atoms: Vec<ProfileAtom>,
    pub density_grid: Vec<GridPoint>,
    pub captured_mass: f64,
    pub truncation_note: String,
}

impl MeasureProfile {
    /// Builds a profile; negative rounding noise in densities is clamped to zero.
    pub fn new(
        domain: Domain,
        atoms: Vec<ProfileAtom>,
        density_grid: Vec<GridPoint>,
        truncation_note: impl Into<String>,
    ) -> Self {
        let density_grid: Vec<GridPoint> = density_grid
            .into_iter()
            .map(|g| GridPoint { abscissa: g.abscissa, density: g.density.max(0.0) })
            .collect();
        let mut p = MeasureProfile {
            domain,
            atoms,
            density_grid,
            captured_mass: 0.0,
            truncation_note: truncation_note.into(),
        };
        p.captured_mass = p.atom_mass() + p.density_mass();
        p
    }

    pub fn atom_mass(&self) -> f64 {
        self.atoms.iter().map(|a| a.weight).sum()
    }

    /// Trapezoid integral of the sampled density. A circle grid whose closing
    /// gap to `first + 2π` is no wider than its other steps is treated as periodic.
    pub fn density_mass(&self) -> f64 {
        let g = &self.density_grid;
        let open: f64 = g
            .windows(2)
            .map(|p| 0.5 * (p[0].density + p[1].density) * (p[1].abscissa - p[0].abscissa))
            .sum();
        if self.domain != Domain::Circle || g.len() < 2 {
            return open;
        }
        let (first, last) = (g[0], g[g.len() - 1]);
        let gap = first.abscissa + TAU - last.abscissa;
        let widest = g.windows(2).map(|p| p[1].abscissa - p[0].abscissa).fold(0.0, f64::max);
        if gap > 0.0 && gap <= 1.5 * widest {
            open + 0.5 * (first.density + last.density) * gap
        } else {
            open
        }
    }

    pub fn abscissas(&self) -> Vec<f64> {
        self.density_grid.iter().map(|g| g.abscissa).collect()
    }

    pub fn densities(&self) -> Vec<f64> {
        self.density_grid.iter().map(|g| g.density).collect()
    }

    /// Density at `x`, linearly interpolated; zero outside the grid.
    pub fn density_at(&self, x: f64) -> f64 {
        let g = &self.density_grid;
        if g.is_empty() || x < g[0].abscissa || x > g[g.len() - 1].abscissa {
            return 0.0;
        }
        let i = g.partition_point(|p| p.abscissa < x);
        if i < g.len() && g[i].abscissa == x {
            return g[i].density;
        }
        if i == 0 {
            return g[0].density;
        }
        let (a, b) = (g[i - 1], g[i]);
        let s = (x - a.abscissa) / (b.abscissa - a.abscissa);
        a.density + s * (b.density - a.density)
    }

    pub fn to_csv(&self) -> String {
        let mut s = String::from("abscissa,density\n");
        for g in &self.density_grid {
            let _ = writeln!(s, "{:.17e},{:.17e}", g.abscissa, g.density);
        }
        s
    }

    /// JSON sidecar holding atoms and mass accounting.
    pub fn sidecar_json(&self) -> serde_json::Value {
        serde_json::json!({
            "domain": self.domain,
            "atoms": self.atoms,
            "atom_mass": self.atom_mass() + 0.0,
            "density_mass": self.density_mass(),
            "captured_mass": self.captured_mass,
            "grid_points": self.density_grid.len(),
            "truncation_note": self.truncation_note,
        })
    }

    /// Writes `path` as CSV and `path` with extension `json` as the sidecar.
    pub fn write(&self, path: &std::path::Path) -> Result<()> {
        std::fs::write(path, self.to_csv())
            .map_err(|source| Error::Io { path: path.to_path_buf(), source })?;
        let side = path.with_extension("json");
        let text = serde_json::to_string_pretty(&self.sidecar_json())
            .map_err(|source| Error::Json { path: side.clone(), source })?;
        std::fs::write(&side, text).map_err(|source| Error::Io { path: side, source })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn merge_is_bitwise() {
        let m = CircleMeasure::from_atoms(&[(1.0, 0.5), (1.0, 0.25), (1.0 + 1e-15, 0.1)]).unwrap();
        assert_eq!(m.atoms().len(), 2);
        assert_eq!(m.atoms()[0].mass, 0.75);
    }

    #[test]
    fn rejects_negative_density() {
        let r = CircleMeasure::from_fourier(1.0, vec![Complex64::new(0.6, 0.0)]);
        assert!(matches!(r, Err(Error::InvalidMeasure(_))));
    }

    #[test]
    fn caratheodory_series_matches_moments() {
        let m = CircleMeasure::new(
            vec![CircleAtom { theta: 0.3, mass: 0.4 }],
            FourierDensity { c0: 1.0, cn: vec![Complex64::new(0.1, 0.2), Complex64::new(-0.05, 0.0)] },
        )
        .unwrap();
        let w = Complex64::new(0.2, -0.1);
        let series: Complex64 =
            m.moment(0) + (1..80).map(|n| 2.0 * m.moment(n) * w.powu(n as u32)).sum::<Complex64>();
        assert!((series - m.caratheodory(w)).norm() < 1e-14);
    }

    #[test]
    fn caratheodory_derivative_matches_difference() {
        let m = CircleMeasure::new(
            vec![CircleAtom { theta: 2.0, mass: 0.7 }],
            FourierDensity { c0: 0.5, cn: vec![Complex64::new(0.0, 0.2)] },
        )
        .unwrap();
        let w = Complex64::new(0.3, 0.4);
        let h = 1e-6;
        let fd = (m.caratheodory(w + h) - m.caratheodory(w - h)) / (2.0 * h);
        assert!((fd - m.caratheodory_derivative(w)).norm() < 1e-8);
    }

    #[test]
    fn profile_interpolates() {
        let p = MeasureProfile::new(
            Domain::Line,
            vec![],
            vec![
                GridPoint { abscissa: 0.0, density: 1.0 },
                GridPoint { abscissa: 1.0, density: 3.0 },
            ],
            "",
        );
        assert_eq!(p.density_at(0.5), 2.0);
        assert_eq!(p.density_at(2.0), 0.0);
        assert_eq!(p.captured_mass, 2.0);
    }
}
