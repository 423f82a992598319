//! Linear and angular momentum densities of a mode at `z = 0` and their plane integrals.
//!
//! Reduced units: the common prefactor `c^2 eps0 / (2 omega)` is dropped, so the
//! longitudinal momentum integrates to the mode norm.

use serde::Serialize;

use crate::modes::{row_major_sum, BeamParams, Coeff4, GridSpec, HgIndex, UNIT_NORM_TOL};
use crate::{Result, C64};

/// Closed-form `(d/dx, d/dy)` of the unit-norm scalar mode.
pub fn analytic_partials(index: HgIndex, params: &BeamParams, x: f64, y: f64) -> (f64, f64) {
    let w2 = params.w0 * params.w0;
    let g = params.mode_norm() * (-(x * x + y * y) / w2).exp();
    let cross = -2.0 * x * y * g / w2;
    match index {
        HgIndex::Psi10 => (g * (1.0 - 2.0 * x * x / w2), cross),
        HgIndex::Psi01 => (cross, g * (1.0 - 2.0 * y * y / w2)),
    }
}

/// Densities on a grid, row major, each entry an `(x, y, z)` vector.
#[derive(Clone, Debug, PartialEq)]
pub struct MomentumField {
    pub params: BeamParams,
    pub spec: GridSpec,
    /// Orbital current; the `z` slot carries the longitudinal density `|f1|^2 + |f2|^2`.
    pub p_orb: Vec<[f64; 3]>,
    /// Spin current (transverse only).
    pub p_sp: Vec<[f64; 3]>,
    /// `r x p_orb`.
    pub l: Vec<[f64; 3]>,
    /// `r x p_sp`.
    pub s: Vec<[f64; 3]>,
}

fn cross(r: [f64; 3], p: [f64; 3]) -> [f64; 3] {
    [r[1] * p[2] - r[2] * p[1], r[2] * p[0] - r[0] * p[2], r[0] * p[1] - r[1] * p[0]]
}

pub fn momentum_density(c: &Coeff4, params: &BeamParams, spec: &GridSpec) -> Result<MomentumField> {
    c.require_unit(UNIT_NORM_TOL)?;
    let n = spec.n;
    let inv_k = 1.0 / params.k;
    let cap = n * n;
    let (mut p_orb, mut p_sp, mut l, mut s) =
        (Vec::with_capacity(cap), Vec::with_capacity(cap), Vec::with_capacity(cap), Vec::with_capacity(cap));
    for iy in 0..n {
        let y = spec.coord(iy, params);
        for ix in 0..n {
            let x = spec.coord(ix, params);
            let [f1, f2] = c.eval_at(params, x, y);
            let (a_x, a_y) = analytic_partials(HgIndex::Psi10, params, x, y);
            let (b_x, b_y) = analytic_partials(HgIndex::Psi01, params, x, y);
            let d = |ca: C64, cb: C64| (ca * a_x + cb * b_x, ca * a_y + cb * b_y);
            let (f1x, f1y) = d(c.0[0], c.0[2]);
            let (f2x, f2y) = d(c.0[1], c.0[3]);

            let orb = [
                inv_k * (f1.conj() * f1x + f2.conj() * f2x).im,
                inv_k * (f1.conj() * f1y + f2.conj() * f2y).im,
                f1.norm_sqr() + f2.norm_sqr(),
            ];
            // d/dx Im(f1* f2) and d/dy Im(f1* f2)
            let gx = (f1x.conj() * f2 + f1.conj() * f2x).im;
            let gy = (f1y.conj() * f2 + f1.conj() * f2y).im;
            let sp = [inv_k * gy, -inv_k * gx, 0.0];
            let r = [x, y, 0.0];
            p_orb.push(orb);
            p_sp.push(sp);
            l.push(cross(r, orb));
            s.push(cross(r, sp));
        }
    }
    Ok(MomentumField { params: *params, spec: *spec, p_orb, p_sp, l, s })
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct IntegralReport {
    /// Total linear momentum per unit length, orbital plus spin current.
    #[serde(rename = "P")]
    pub p: [f64; 3],
    #[serde(rename = "P_sp")]
    pub p_sp: [f64; 3],
    #[serde(rename = "L")]
    pub l: [f64; 3],
    #[serde(rename = "S")]
    pub s: [f64; 3],
    #[serde(rename = "J")]
    pub j: [f64; 3],
    pub n: usize,
    pub half_extent: f64,
    /// Power of a first-order mode outside the inscribed disc of the grid.
    pub truncation_estimate: f64,
}

fn integrate_vec(n: usize, area: f64, v: &[[f64; 3]]) -> [f64; 3] {
    let mut out = [0.0; 3];
    for (axis, o) in out.iter_mut().enumerate() {
        let comp: Vec<f64> = v.iter().map(|e| e[axis]).collect();
        *o = row_major_sum(n, &comp) * area;
    }
    out
}

pub fn truncation_estimate(spec: &GridSpec) -> f64 {
    let r2 = 2.0 * spec.half_extent * spec.half_extent;
    (1.0 + r2) * (-r2).exp()
}

pub fn integrate(f: &MomentumField) -> IntegralReport {
    let n = f.spec.n;
    let area = f.spec.cell_area(&f.params);
    let p_orb = integrate_vec(n, area, &f.p_orb);
    let p_sp = integrate_vec(n, area, &f.p_sp);
    let l = integrate_vec(n, area, &f.l);
    let s = integrate_vec(n, area, &f.s);
    let sum = |a: [f64; 3], b: [f64; 3]| [a[0] + b[0], a[1] + b[1], a[2] + b[2]];
    IntegralReport {
        p: sum(p_orb, p_sp),
        p_sp,
        l,
        s,
        j: sum(l, s),
        n,
        half_extent: f.spec.half_extent,
        truncation_estimate: truncation_estimate(&f.spec),
    }
}

/// Closed-form helicity `(2/k) Im(c1* c2 + c3* c4)`.
pub fn helicity_sz(c: &Coeff4, params: &BeamParams) -> Result<f64> {
    c.require_unit(UNIT_NORM_TOL)?;
    let v = &c.0;
    Ok(2.0 / params.k * (v[0].conj() * v[1] + v[2].conj() * v[3]).im)
}

/// Closed-form orbital angular momentum `(2/k) Im(c1* c3 + c2* c4)`.
pub fn orbital_lz(c: &Coeff4, params: &BeamParams) -> Result<f64> {
    c.require_unit(UNIT_NORM_TOL)?;
    let v = &c.0;
    Ok(2.0 / params.k * (v[0].conj() * v[2] + v[1].conj() * v[3]).im)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::modes::{cpm_basis, eval_scalar_mode, g_operator, make_uab, CpmLabel, Sign};
    use crate::Error;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;
    use std::f64::consts::FRAC_1_SQRT_2;

    fn c(re: f64, im: f64) -> C64 {
        C64::new(re, im)
    }

    fn report(u: &Coeff4, n: usize) -> IntegralReport {
        let params = BeamParams::default();
        integrate(&momentum_density(u, &params, &GridSpec::new(n, 5.0).unwrap()).unwrap())
    }

    fn random_unit(rng: &mut ChaCha8Rng) -> Coeff4 {
        let v = Coeff4::new([0; 4].map(|_| c(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0))));
        v.scale(c(1.0 / v.norm(), 0.0))
    }

    #[test]
    fn partial_examples() {
        let p = BeamParams::default();
        let (dx, _) = analytic_partials(HgIndex::Psi10, &p, 0.0, 0.0);
        assert!((dx - 1.595769121605731).abs() < 1e-12);
        for x in [-2.0, 0.3, 1.7] {
            assert_eq!(analytic_partials(HgIndex::Psi10, &p, x, 0.0).1, 0.0);
        }
    }

    #[test]
    fn partials_match_finite_differences() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let p = BeamParams::new(1.3, 4.0).unwrap();
        let h = 1e-5 * p.w0;
        for _ in 0..100 {
            let (x, y) = (rng.random_range(-2.0..2.0), rng.random_range(-2.0..2.0));
            for idx in [HgIndex::Psi10, HgIndex::Psi01] {
                let (dx, dy) = analytic_partials(idx, &p, x, y);
                let fx = (eval_scalar_mode(idx, &p, x + h, y) - eval_scalar_mode(idx, &p, x - h, y)) / (2.0 * h);
                let fy = (eval_scalar_mode(idx, &p, x, y + h) - eval_scalar_mode(idx, &p, x, y - h)) / (2.0 * h);
                let scale = p.mode_norm();
                assert!((dx - fx).abs() < 1e-6 * scale.max(dx.abs()));
                assert!((dy - fy).abs() < 1e-6 * scale.max(dy.abs()));
            }
        }
    }

    #[test]
    fn real_modes_carry_no_transverse_orbital_current() {
        let f = momentum_density(&cpm_basis(CpmLabel::RadialPlus), &BeamParams::default(), &GridSpec::new(32, 4.0).unwrap())
            .unwrap();
        assert!(f.p_orb.iter().all(|p| p[0] == 0.0 && p[1] == 0.0));
        let f = momentum_density(&Coeff4::from_real([1.0, 0.0, 0.0, 0.0]), &BeamParams::default(), &GridSpec::new(32, 4.0).unwrap())
            .unwrap();
        assert!(f.p_sp.iter().all(|p| p.iter().all(|v| *v == 0.0)));
        assert!(f.p_orb.iter().all(|p| p[2] >= 0.0));
    }

    #[test]
    fn cpm_modes_have_zero_angular_momentum() {
        for l in CpmLabel::ALL {
            let r = report(&cpm_basis(l), 256);
            for v in [r.l, r.s, r.j] {
                assert!(v.iter().all(|x| x.abs() < 1e-8), "{l}: {v:?}");
            }
            assert!((r.p[2] - 1.0).abs() < 1e-9);
            assert!(r.p[0].abs() < 1e-8 && r.p[1].abs() < 1e-8);
            assert!(r.p_sp.iter().all(|x| x.abs() < 1e-8));
        }
    }

    #[test]
    fn circular_polarization_helicity() {
        let k = BeamParams::default().k;
        let s = FRAC_1_SQRT_2;
        let u = Coeff4::new([c(s, 0.0), c(0.0, s), c(0.0, 0.0), c(0.0, 0.0)]);
        let r = report(&u, 256);
        assert!((r.s[2] - 1.0 / k).abs() < 1e-6 / k);
        assert!((helicity_sz(&u, &BeamParams::default()).unwrap() - 1.0 / k).abs() < 1e-15);
        assert!((helicity_sz(&u, &BeamParams::default()).unwrap() - r.s[2]).abs() < 1e-8);
    }

    #[test]
    fn x_polarized_lg_carries_orbital_unit() {
        let k = BeamParams::default().k;
        let s = FRAC_1_SQRT_2;
        let u = Coeff4::new([c(s, 0.0), c(0.0, 0.0), c(0.0, s), c(0.0, 0.0)]);
        let r = report(&u, 256);
        assert!((r.l[2] - 1.0 / k).abs() < 1e-6 / k);
        assert!(r.s[2].abs() < 1e-6 / k);
        assert!((orbital_lz(&u, &BeamParams::default()).unwrap() - r.l[2]).abs() < 1e-8);
    }

    #[test]
    fn separable_lg_mode_has_opposite_spin_and_orbit() {
        let p = BeamParams::default();
        let u = make_uab(c(0.0, FRAC_1_SQRT_2), c(FRAC_1_SQRT_2, 0.0), Sign::Plus).unwrap();
        let sz = helicity_sz(&u, &p).unwrap();
        assert!((sz + 1.0 / p.k).abs() < 1e-15);
        let r = report(&u, 256);
        assert!((r.s[2] - sz).abs() < 1e-8);
        assert!(r.j[2].abs() < 1e-8);
        let u = Coeff4::new([c(FRAC_1_SQRT_2, 0.0), c(0.0, FRAC_1_SQRT_2), c(0.0, 0.0), c(0.0, 0.0)]);
        assert!((helicity_sz(&u, &p).unwrap() - 1.0 / p.k).abs() < 1e-15);
    }

    #[test]
    fn random_modes_integrals() {
        let p = BeamParams::default();
        let mut rng = ChaCha8Rng::seed_from_u64(12);
        for _ in 0..5 {
            let u = random_unit(&mut rng);
            let r = report(&u, 128);
            assert!((r.p[2] - 1.0).abs() < 1e-9);
            assert!(r.p_sp.iter().all(|x| x.abs() < 1e-8));
            assert!((r.s[2] - helicity_sz(&u, &p).unwrap()).abs() < 1e-8);
            assert!((r.l[2] - orbital_lz(&u, &p).unwrap()).abs() < 1e-8);
            for i in 0..3 {
                assert_eq!(r.j[i], r.l[i] + r.s[i]);
            }
            let g = report(&g_operator(Sign::Plus, 0.7).apply(&u), 128);
            assert!((g.l[2] - r.l[2]).abs() < 1e-8 && (g.s[2] - r.s[2]).abs() < 1e-8);
            assert!((g.p[2] - r.p[2]).abs() < 1e-8);
            let fine = report(&u, 256);
            for (a, b) in [(r.p, fine.p), (r.l, fine.l), (r.s, fine.s)] {
                for i in 0..3 {
                    assert!((a[i] - b[i]).abs() < 1e-8);
                }
            }
        }
    }

    #[test]
    fn rejects_unnormalized() {
        let u = Coeff4::from_real([1.0, 1.0, 0.0, 0.0]);
        assert!(matches!(helicity_sz(&u, &BeamParams::default()), Err(Error::NotNormalized(_))));
        assert!(momentum_density(&u, &BeamParams::default(), &GridSpec::default()).is_err());
    }

    #[test]
    fn truncation_estimate_is_tiny() {
        assert!(truncation_estimate(&GridSpec::default()) < 1e-19);
    }
}
