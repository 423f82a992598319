//! Intensity images and polarization-ellipse fields.

use std::f64::consts::PI;

use serde::Serialize;

use crate::modes::{evaluate_field, BeamParams, Coeff4, FieldGrid, GridSpec, UNIT_NORM_TOL};
use crate::{Error, Result, C64};

/// Ellipses are sampled on every `ELLIPSE_STRIDE`-th cell in each direction.
pub const ELLIPSE_STRIDE: usize = 16;

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct Ellipse {
    pub x: f64,
    pub y: f64,
    /// Major-axis angle in `[0, pi)`.
    pub orientation: f64,
    /// Ellipticity angle in `[-pi/4, pi/4]`.
    pub ellipticity: f64,
    pub intensity: f64,
}

/// Local polarization ellipse of a Jones vector.
pub fn ellipse_of(ex: C64, ey: C64) -> (f64, f64) {
    let s0 = ex.norm_sqr() + ey.norm_sqr();
    let s1 = ex.norm_sqr() - ey.norm_sqr();
    let cross = ex.conj() * ey;
    let (s2, s3) = (2.0 * cross.re, 2.0 * cross.im);
    let orientation = (0.5 * s2.atan2(s1)).rem_euclid(PI);
    let ellipticity = if s0 > 0.0 { 0.5 * (s3 / s0).clamp(-1.0, 1.0).asin() } else { 0.0 };
    (orientation, ellipticity)
}

/// Distance between two axis angles modulo `pi`.
pub fn axis_distance(a: f64, b: f64) -> f64 {
    let d = (a - b).rem_euclid(PI);
    d.min(PI - d)
}

#[derive(Clone, Debug, PartialEq)]
pub struct Rendering {
    pub ppm: Vec<u8>,
    pub ellipses: Vec<Ellipse>,
    pub max_intensity: f64,
    pub ring_peak_radius: f64,
}

/// Binary P6 image, linear grey scale, top row at the largest `y`.
pub fn intensity_ppm(field: &FieldGrid) -> Result<Vec<u8>> {
    let n = field.n();
    let intensity = field.intensity();
    let max = intensity.iter().cloned().fold(0.0, f64::max);
    if max <= 0.0 {
        return Err(Error::ZeroField);
    }
    let mut out = format!("P6\n{n} {n}\n255\n").into_bytes();
    out.reserve(3 * n * n);
    for iy in (0..n).rev() {
        for ix in 0..n {
            let g = (intensity[iy * n + ix] / max * 255.0).round() as u8;
            out.extend_from_slice(&[g, g, g]);
        }
    }
    Ok(out)
}

pub fn ellipse_field(field: &FieldGrid) -> Vec<Ellipse> {
    let n = field.n();
    let mut out = Vec::new();
    for iy in (0..n).step_by(ELLIPSE_STRIDE) {
        for ix in (0..n).step_by(ELLIPSE_STRIDE) {
            let (x, y) = field.point(ix, iy);
            let [ex, ey] = field.at(ix, iy);
            let (orientation, ellipticity) = ellipse_of(ex, ey);
            out.push(Ellipse { x, y, orientation, ellipticity, intensity: ex.norm_sqr() + ey.norm_sqr() });
        }
    }
    out
}

/// Radius of the brightest cell; the first one in row-major order on ties.
pub fn ring_peak_radius(field: &FieldGrid) -> f64 {
    let intensity = field.intensity();
    let n = field.n();
    let mut best = 0;
    for (k, v) in intensity.iter().enumerate() {
        if *v > intensity[best] {
            best = k;
        }
    }
    let (x, y) = field.point(best % n, best / n);
    x.hypot(y)
}

pub fn render(c: &Coeff4, params: &BeamParams, spec: &GridSpec) -> Result<Rendering> {
    c.require_unit(UNIT_NORM_TOL)?;
    let field = evaluate_field(c, params, spec);
    Ok(Rendering {
        ppm: intensity_ppm(&field)?,
        ellipses: ellipse_field(&field),
        max_intensity: field.intensity().into_iter().fold(0.0, f64::max),
        ring_peak_radius: ring_peak_radius(&field),
    })
}

/// Largest deviation of the orientation from `expected(x, y)` over cells brighter than
/// `fraction` of the maximum.
pub fn orientation_deviation(field: &FieldGrid, fraction: f64, expected: impl Fn(f64, f64) -> f64) -> f64 {
    let intensity = field.intensity();
    let max = intensity.iter().cloned().fold(0.0, f64::max);
    let n = field.n();
    let mut worst: f64 = 0.0;
    for iy in 0..n {
        for ix in 0..n {
            if intensity[iy * n + ix] <= fraction * max {
                continue;
            }
            let (x, y) = field.point(ix, iy);
            let [ex, ey] = field.at(ix, iy);
            worst = worst.max(axis_distance(ellipse_of(ex, ey).0, expected(x, y)));
        }
    }
    worst
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::modes::{cpm_basis, CpmLabel};
    use std::f64::consts::FRAC_PI_2;

    fn c(re: f64, im: f64) -> C64 {
        C64::new(re, im)
    }

    #[test]
    fn ellipse_of_basic_states() {
        let (o, e) = ellipse_of(c(1.0, 0.0), c(0.0, 0.0));
        assert_eq!((o, e), (0.0, 0.0));
        let (o, _) = ellipse_of(c(0.0, 0.0), c(1.0, 0.0));
        assert!((o - FRAC_PI_2).abs() < 1e-15);
        let (o, _) = ellipse_of(c(1.0, 0.0), c(-1.0, 0.0));
        assert!((o - 3.0 * PI / 4.0).abs() < 1e-15);
        let (_, e) = ellipse_of(c(1.0, 0.0), c(0.0, 1.0));
        assert!((e - PI / 4.0).abs() < 1e-12);
        assert_eq!(ellipse_of(c(0.0, 0.0), c(0.0, 0.0)), (0.0, 0.0));
    }

    #[test]
    fn axis_distance_wraps() {
        assert!(axis_distance(0.01, PI - 0.01) < 0.0200001);
        assert_eq!(axis_distance(1.0, 1.0 + PI), 0.0);
    }

    #[test]
    fn radial_and_azimuthal_patterns() {
        let params = BeamParams::default();
        let spec = GridSpec::new(64, 3.0).unwrap();
        let r = evaluate_field(&cpm_basis(CpmLabel::RadialPlus), &params, &spec);
        assert!(orientation_deviation(&r, 0.01, |x, y| y.atan2(x)) < 1e-12);
        let a = evaluate_field(&cpm_basis(CpmLabel::AzimuthalPlus), &params, &spec);
        assert!(orientation_deviation(&a, 0.01, |x, y| y.atan2(x) + FRAC_PI_2) < 1e-12);
    }

    #[test]
    fn ring_radius_and_image_layout() {
        let params = BeamParams::new(1.5, 2.0 * PI).unwrap();
        let spec = GridSpec::new(128, 4.0).unwrap();
        let out = render(&cpm_basis(CpmLabel::RadialPlus), &params, &spec).unwrap();
        let step = spec.step(&params);
        assert!((out.ring_peak_radius - 1.5 / 2f64.sqrt()).abs() <= step);
        let header = b"P6\n128 128\n255\n";
        assert_eq!(&out.ppm[..header.len()], header);
        assert_eq!(out.ppm.len(), header.len() + 3 * 128 * 128);
        assert_eq!(out.ppm.iter().skip(header.len()).max(), Some(&255));
        assert_eq!(out.ellipses.len(), 64);
    }

    #[test]
    fn image_top_row_is_largest_y() {
        let params = BeamParams::default();
        let spec = GridSpec::new(16, 3.0).unwrap();
        let mut field = evaluate_field(&cpm_basis(CpmLabel::RadialPlus), &params, &spec);
        let n = field.n();
        for k in 0..n * n {
            let bright = k / n == n - 1;
            field.ex[k] = c(if bright { 1.0 } else { 0.0 }, 0.0);
            field.ey[k] = c(0.0, 0.0);
        }
        let ppm = intensity_ppm(&field).unwrap();
        let body = &ppm[ppm.len() - 3 * n * n..];
        assert!(body[..3 * n].iter().all(|&g| g == 255));
        assert!(body[3 * n..].iter().all(|&g| g == 0));
    }

    #[test]
    fn rejects_unnormalized_modes() {
        let z = Coeff4::zero();
        assert!(matches!(
            render(&z, &BeamParams::default(), &GridSpec::new(16, 3.0).unwrap()),
            Err(Error::NotNormalized(_))
        ));
    }
}
