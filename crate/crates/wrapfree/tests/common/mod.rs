#![allow(dead_code)]

use std::f64::consts::TAU;

use num_complex::Complex64 as C;
use proptest::prelude::*;
use wrapfree::measures::{CircleAtom, CircleMeasure, FourierDensity};
use wrapfree::{BooleanIDDescriptor, ClassLDescriptor};

/// Atoms plus a density `c0 + 2 Re(c1 e^{iθ} + c2 e^{2iθ})` kept positive by `|c1| + |c2| ≤ c0/4`.
pub fn circle_measure() -> impl Strategy<Value = CircleMeasure> {
    let atoms = prop::collection::vec((0.0..TAU, 0.0..1.0f64), 0..4);
    let fourier = (0.0..1.5f64, 0.0..TAU, 0.0..TAU, 0.0..1.0f64);
    (atoms, fourier).prop_map(|(atoms, (c0, p1, p2, split))| {
        let r = c0 / 4.0;
        let cn = vec![C::from_polar(r * split, p1), C::from_polar(r * (1.0 - split), p2)];
        let atoms = atoms.into_iter().map(|(theta, mass)| CircleAtom { theta, mass }).collect();
        CircleMeasure::new(atoms, FourierDensity { c0, cn }).expect("positive by construction")
    })
}

pub fn descriptor() -> impl Strategy<Value = ClassLDescriptor> {
    (-10.0..10.0f64, circle_measure()).prop_map(|(beta, sigma)| ClassLDescriptor::new(beta, sigma).unwrap())
}

pub fn boolean_id() -> impl Strategy<Value = BooleanIDDescriptor> {
    (0.0..TAU, circle_measure())
        .prop_map(|(phase, sigma)| BooleanIDDescriptor::new(C::from_polar(1.0, phase), sigma).unwrap())
}

pub fn upper_point() -> impl Strategy<Value = C> {
    (-20.0..20.0f64, 0.05..10.0f64).prop_map(|(x, y)| C::new(x, y))
}

pub fn disk_point(radius: f64) -> impl Strategy<Value = C> {
    (0.0..radius, 0.0..TAU).prop_map(|(r, t)| C::from_polar(r, t))
}

pub fn close(a: C, b: C, tol: f64) -> bool {
    (a - b).norm() <= tol * (1.0 + b.norm())
}
