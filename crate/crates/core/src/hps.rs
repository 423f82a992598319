//! Hybrid Stokes parameters and navigation on the two hybrid Poincare spheres.
//!
//! Points are parametrized by the amplitudes `f_A = cos(theta/2)` and
//! `f_R = e^{i phi} sin(theta/2)` of the azimuthal and radial modes of one
//! rotation class. With the Stokes definitions used here this places the point at
//! `S / S0 = (-cos theta, sin theta cos phi, -sin theta sin phi)`; the
//! conventional axis ordering `(cos theta, sin theta cos phi, sin theta sin phi)`
//! is available as [`SpherePoint::axes`] for display.

use std::f64::consts::{PI, TAU};
use std::fmt;
use std::str::FromStr;

use serde::Serialize;

use crate::elements::mirror_transform;
use crate::modes::{cpm_basis, make_uab, Coeff4, CpmLabel, Sign};
use crate::{Error, Result, C64};

/// Angular tolerance for the restricted rules.
pub const RULE_PHI_TOL: f64 = 1e-9;

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct HybridStokes {
    pub s0: f64,
    pub s1: f64,
    pub s2: f64,
    pub s3: f64,
    pub sphere: Sign,
}

impl HybridStokes {
    /// `S1^2 + S2^2 + S3^2 - S0^2`; zero for every pure state.
    pub fn purity_defect(&self) -> f64 {
        self.s1 * self.s1 + self.s2 * self.s2 + self.s3 * self.s3 - self.s0 * self.s0
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct SpherePoint {
    pub theta: f64,
    pub phi: f64,
    pub sphere: Sign,
}

impl SpherePoint {
    pub fn new(theta: f64, phi: f64, sphere: Sign) -> Result<Self> {
        if !(0.0..=PI).contains(&theta) || !phi.is_finite() {
            return Err(Error::InvalidArgument(format!("theta {theta} outside [0, pi]")));
        }
        Ok(SpherePoint { theta, phi: wrap_angle(phi), sphere })
    }

    /// `(cos theta, sin theta cos phi, sin theta sin phi)`.
    pub fn axes(&self) -> [f64; 3] {
        let (st, ct) = self.theta.sin_cos();
        [ct, st * self.phi.cos(), st * self.phi.sin()]
    }
}

/// Maps into `[0, 2 pi)`.
pub fn wrap_angle(phi: f64) -> f64 {
    let w = phi.rem_euclid(TAU);
    if w >= TAU {
        0.0
    } else {
        w
    }
}

/// Returns `(f_A, f_R)`.
pub fn amplitudes_from_sphere(p: &SpherePoint) -> (C64, C64) {
    let (s, c) = (0.5 * p.theta).sin_cos();
    (C64::new(c, 0.0), C64::from_polar(s, p.phi))
}

pub fn hybrid_stokes(f_r: C64, f_a: C64, sphere: Sign) -> Result<HybridStokes> {
    let s0 = f_r.norm_sqr() + f_a.norm_sqr();
    if s0 == 0.0 || !s0.is_finite() {
        return Err(Error::ZeroField);
    }
    let cross = f_r.conj() * f_a;
    Ok(HybridStokes {
        s0,
        s1: f_r.norm_sqr() - f_a.norm_sqr(),
        s2: 2.0 * cross.re,
        s3: 2.0 * cross.im,
        sphere,
    })
}

/// Inverse of the amplitude parametrization; `phi` is reported as 0 at the poles.
pub fn sphere_from_stokes(s: &HybridStokes) -> SpherePoint {
    let cos_t = (-s.s1 / s.s0).clamp(-1.0, 1.0);
    let theta = cos_t.acos();
    let transverse = s.s2.hypot(s.s3);
    let phi = if transverse <= 1e-15 * s.s0 { 0.0 } else { wrap_angle((-s.s3).atan2(s.s2)) };
    SpherePoint { theta, phi, sphere: s.sphere }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct SphereComponent {
    /// Radial amplitude `<u_R|c>`.
    pub a: C64,
    /// Azimuthal amplitude `<u_A|c>`.
    pub b: C64,
    pub weight: f64,
}

impl SphereComponent {
    pub fn point(&self, sphere: Sign) -> Result<SpherePoint> {
        Ok(sphere_from_stokes(&hybrid_stokes(self.a, self.b, sphere)?))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct Superselection {
    pub plus: SphereComponent,
    pub minus: SphereComponent,
}

impl Superselection {
    pub fn component(&self, sphere: Sign) -> &SphereComponent {
        match sphere {
            Sign::Plus => &self.plus,
            Sign::Minus => &self.minus,
        }
    }
}

pub fn superselect(c: &Coeff4) -> Superselection {
    let part = |s: Sign| {
        let a = cpm_basis(CpmLabel::radial(s)).inner(c);
        let b = cpm_basis(CpmLabel::azimuthal(s)).inner(c);
        SphereComponent { a, b, weight: a.norm_sqr() + b.norm_sqr() }
    };
    Superselection { plus: part(Sign::Plus), minus: part(Sign::Minus) }
}

/// The unit mode sitting at `p`.
pub fn coeff_from_point(p: &SpherePoint) -> Coeff4 {
    let (f_a, f_r) = amplitudes_from_sphere(p);
    make_uab(f_r, f_a, p.sphere).expect("sphere amplitudes are normalized")
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum TransformRule {
    /// `(theta, phi) -> (pi - theta, phi)` for `phi` a multiple of `pi/2`.
    A,
    /// `(theta, phi) -> (pi - theta, pi + phi)` for `phi` a multiple of `pi/2`.
    B,
    /// `(theta, phi) -> (theta, pi + phi)` for any `phi`.
    C,
}

impl fmt::Display for TransformRule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            TransformRule::A => "a",
            TransformRule::B => "b",
            TransformRule::C => "c",
        })
    }
}

impl FromStr for TransformRule {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "a" => Ok(TransformRule::A),
            "b" => Ok(TransformRule::B),
            "c" => Ok(TransformRule::C),
            _ => Err(Error::InvalidArgument(format!("unknown rule '{s}'"))),
        }
    }
}

fn on_quarter_grid(phi: f64) -> bool {
    let q = phi / (0.5 * PI);
    (q - q.round()).abs() * 0.5 * PI <= RULE_PHI_TOL
}

pub fn allowed_transform(p: &SpherePoint, rule: TransformRule) -> Result<SpherePoint> {
    let restricted = matches!(rule, TransformRule::A | TransformRule::B);
    if restricted && !on_quarter_grid(p.phi) {
        let name = if rule == TransformRule::A { 'a' } else { 'b' };
        return Err(Error::ForbiddenTransform { rule: name, phi: p.phi });
    }
    let (theta, phi) = match rule {
        TransformRule::A => (PI - p.theta, p.phi),
        TransformRule::B => (PI - p.theta, p.phi + PI),
        TransformRule::C => (p.theta, p.phi + PI),
    };
    Ok(SpherePoint { theta, phi: wrap_angle(phi), sphere: p.sphere })
}

/// Moves a point to the other sphere. A half-wave plate at 0 sends both
/// `u_R+ -> -u_R-` and `u_A+ -> -u_A-`, so the angles are unchanged up to a global sign.
pub fn mirror_swap(p: &SpherePoint) -> SpherePoint {
    SpherePoint { theta: p.theta, phi: p.phi, sphere: p.sphere.flip() }
}

/// The same map computed through the coefficient action, for cross-checking.
pub fn mirror_swap_via_coefficients(p: &SpherePoint) -> Result<SpherePoint> {
    let image = mirror_transform().apply(&coeff_from_point(p));
    let target = p.sphere.flip();
    superselect(&image).component(target).point(target)
}
