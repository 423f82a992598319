//! Named invariant suites with tolerances, as run by `cypol verify`.

use std::f64::consts::{FRAC_1_SQRT_2, PI};
use std::fmt;
use std::str::FromStr;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::algebra::{Mat2, Mat4};
use crate::config::RunConfig;
use crate::elements::{
    jones_circular, jones_hwp, lift, spatial_flip, symmetry_check, tensor_transform, two_hwp,
    ElementKind, ElementMatrix2, Handedness, SymmetryClass, Transform4, DEFAULT_PHI_SAMPLES,
    DEFAULT_SYMMETRY_TOL,
};
use crate::hps::{
    allowed_transform, coeff_from_point, hybrid_stokes, mirror_swap, mirror_swap_via_coefficients,
    superselect, SpherePoint, TransformRule,
};
use crate::modes::{
    check_rotation_law, cpm_basis, grid_rotation_residual, make_uab, Coeff4, CpmLabel,
    Sign,
};
use crate::momentum::{helicity_sz, integrate, momentum_density};
use crate::quantum::{
    a_ab, coherent_signal, coherent_state, entanglement_entropy, factorization_residual,
    photon_wavefunction, single_photon, squeezed_state, tmsv_amplitude, FockState, Squeezer,
};
use crate::schmidt::schmidt_of;
use crate::{Error, Result, C64};

const SEED: u64 = 0x5eed_cafe;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Suite {
    Rotation,
    Schmidt,
    Momentum,
    Hps,
    Elements,
    Quantum,
    All,
}

impl Suite {
    pub const EACH: [Suite; 6] =
        [Suite::Rotation, Suite::Schmidt, Suite::Momentum, Suite::Hps, Suite::Elements, Suite::Quantum];
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Suite::Rotation => "rotation",
            Suite::Schmidt => "schmidt",
            Suite::Momentum => "momentum",
            Suite::Hps => "hps",
            Suite::Elements => "elements",
            Suite::Quantum => "quantum",
            Suite::All => "all",
        })
    }
}

impl FromStr for Suite {
    type Err = Error;
    fn from_str(s: &str) -> Result<Suite> {
        Suite::EACH
            .into_iter()
            .chain([Suite::All])
            .find(|x| x.to_string() == s)
            .ok_or_else(|| Error::InvalidArgument(format!("unknown suite '{s}'")))
    }
}

/// One measured quantity; it passes when `value <= tolerance`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Check {
    pub name: String,
    pub value: f64,
    pub tolerance: f64,
    pub pass: bool,
    /// Informational checks never affect the exit code.
    pub gating: bool,
}

impl Check {
    pub fn at_most(name: impl Into<String>, value: f64, tolerance: f64) -> Check {
        Check { name: name.into(), value, tolerance, pass: value <= tolerance, gating: true }
    }

    /// A yes/no outcome as value 0 (holds) or 1 (fails) against tolerance 0.
    pub fn holds(name: impl Into<String>, ok: bool) -> Check {
        Check::at_most(name, if ok { 0.0 } else { 1.0 }, 0.0)
    }

    pub fn informational(mut self) -> Check {
        self.gating = false;
        self
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct VerifyReport {
    pub suite: Suite,
    pub checks: Vec<Check>,
    pub pass: bool,
    pub failed: Vec<String>,
}

impl VerifyReport {
    fn new(suite: Suite, checks: Vec<Check>) -> VerifyReport {
        let failed: Vec<String> =
            checks.iter().filter(|c| c.gating && !c.pass).map(|c| c.name.clone()).collect();
        VerifyReport { suite, pass: failed.is_empty(), checks, failed }
    }
}

pub fn run_suite(suite: Suite, cfg: &RunConfig) -> Result<VerifyReport> {
    let checks = match suite {
        Suite::Rotation => rotation(cfg)?,
        Suite::Schmidt => schmidt(cfg)?,
        Suite::Momentum => momentum(cfg)?,
        Suite::Hps => hps(cfg)?,
        Suite::Elements => elements(cfg)?,
        Suite::Quantum => quantum(cfg)?,
        Suite::All => {
            let mut all = Vec::new();
            for s in Suite::EACH {
                all.extend(run_suite(s, cfg)?.checks);
            }
            all
        }
    };
    Ok(VerifyReport::new(suite, checks))
}

fn c(re: f64, im: f64) -> C64 {
    C64::new(re, im)
}

fn random_pair(rng: &mut ChaCha8Rng) -> (C64, C64) {
    let (a, b) = (c(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0)), c(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0)));
    let n = (a.norm_sqr() + b.norm_sqr()).sqrt();
    (a / n, b / n)
}

fn random_real_pair(rng: &mut ChaCha8Rng) -> (C64, C64) {
    let t: f64 = rng.random_range(0.0..2.0 * PI);
    (c(t.cos(), 0.0), c(t.sin(), 0.0))
}

fn rand_c(rng: &mut ChaCha8Rng) -> C64 {
    c(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0))
}

fn rotation(cfg: &RunConfig) -> Result<Vec<Check>> {
    let tol = &cfg.tol;
    let mut rng = ChaCha8Rng::seed_from_u64(SEED);
    let phis: Vec<f64> = (0..10).map(|_| rng.random_range(-PI..PI)).collect();
    let mut worst = [0.0f64; 2];
    let mut double: f64 = 0.0;
    for _ in 0..20 {
        let (a, b) = random_pair(&mut rng);
        for (slot, sign) in [Sign::Plus, Sign::Minus].into_iter().enumerate() {
            let rep = check_rotation_law(&make_uab(a, b, sign)?, sign, &phis)?;
            worst[slot] = worst[slot].max(rep.max_residual);
            if let Some(d) = rep.double_angle_residual {
                double = double.max(d);
            }
        }
    }
    let mut grid: f64 = 0.0;
    for label in CpmLabel::ALL {
        grid = grid.max(grid_rotation_residual(&cpm_basis(label), label.sign(), 0.7, &cfg.beam, &cfg.grid));
    }
    Ok(vec![
        Check::at_most("rotation.plus_law", worst[0], tol.get("rotation")),
        Check::at_most("rotation.minus_law", worst[1], tol.get("rotation")),
        Check::at_most("rotation.double_angle", double, tol.get("double_angle")),
        Check::at_most("rotation.grid_law", grid, tol.get("grid_rotation")),
    ])
}

fn schmidt(cfg: &RunConfig) -> Result<Vec<Check>> {
    let tol = &cfg.tol;
    let mut out = Vec::new();
    for label in CpmLabel::ALL {
        let k = schmidt_of(&cpm_basis(label))?.k;
        out.push(Check::at_most(format!("schmidt.K[{label}]"), (k - 2.0).abs(), tol.get("schmidt_k")));
    }
    let s = FRAC_1_SQRT_2;
    for (name, a) in [("A=iB", c(0.0, s)), ("A=-iB", c(0.0, -s))] {
        let k = schmidt_of(&make_uab(a, c(s, 0.0), Sign::Plus)?)?.k;
        out.push(Check::at_most(format!("schmidt.K[{name}]"), (k - 1.0).abs(), tol.get("schmidt_sep")));
    }
    let k = schmidt_of(&make_uab(c(0.5, 0.5), c(s, 0.0), Sign::Plus)?)?.k;
    out.push(Check::at_most("schmidt.K[intermediate]", (k - 4.0 / 3.0).abs(), tol.get("schmidt_sep")));
    Ok(out)
}

fn momentum(cfg: &RunConfig) -> Result<Vec<Check>> {
    let tol = &cfg.tol;
    let max_abs = |v: &[f64; 3]| v.iter().fold(0.0f64, |m, x| m.max(x.abs()));
    let mut out = Vec::new();
    for label in CpmLabel::ALL {
        let r = integrate(&momentum_density(&cpm_basis(label), &cfg.beam, &cfg.grid)?);
        let tam = max_abs(&r.l).max(max_abs(&r.s)).max(max_abs(&r.j));
        out.push(Check::at_most(format!("momentum.tam[{label}]"), tam, tol.get("tam")));
        out.push(Check::at_most(format!("momentum.p_z[{label}]"), (r.p[2] - 1.0).abs(), tol.get("p_z")));
        out.push(Check::at_most(format!("momentum.p_transverse[{label}]"), r.p[0].abs().max(r.p[1].abs()), tol.get("tam")));
        out.push(Check::at_most(format!("momentum.p_sp[{label}]"), max_abs(&r.p_sp), tol.get("p_sp")));
    }
    let s = FRAC_1_SQRT_2;
    let circ = Coeff4::new([c(s, 0.0), c(0.0, s), c(0.0, 0.0), c(0.0, 0.0)]);
    let r = integrate(&momentum_density(&circ, &cfg.beam, &cfg.grid)?);
    let k = cfg.beam.k;
    out.push(Check::at_most("momentum.helicity_rel", (r.s[2] * k - 1.0).abs(), tol.get("helicity_rel")));
    out.push(Check::at_most(
        "momentum.helicity_closed_form",
        (helicity_sz(&circ, &cfg.beam)? - r.s[2]).abs(),
        tol.get("helicity_closed"),
    ));
    Ok(out)
}

fn angle_gap(a: f64, b: f64) -> f64 {
    let d = (a - b).rem_euclid(2.0 * PI);
    d.min(2.0 * PI - d)
}

fn hps(cfg: &RunConfig) -> Result<Vec<Check>> {
    let tol = &cfg.tol;
    let mut rng = ChaCha8Rng::seed_from_u64(SEED + 1);
    let mut roundtrip: f64 = 0.0;
    let mut purity: f64 = 0.0;
    let mut mirror: f64 = 0.0;
    for _ in 0..200 {
        let sphere = if rng.random::<bool>() { Sign::Plus } else { Sign::Minus };
        let p = SpherePoint::new(rng.random_range(0.05..PI - 0.05), rng.random_range(0.0..2.0 * PI), sphere)?;
        let comp = *superselect(&coeff_from_point(&p)).component(sphere);
        let q = comp.point(sphere)?;
        roundtrip = roundtrip.max((p.theta - q.theta).abs()).max(angle_gap(p.phi, q.phi));
        let (fr, fa) = random_pair(&mut rng);
        let st = hybrid_stokes(fr * 3.0, fa * 3.0, sphere)?;
        purity = purity.max(st.purity_defect().abs() / (st.s0 * st.s0));
        let m = mirror_swap_via_coefficients(&p)?;
        let e = mirror_swap(&p);
        mirror = mirror.max((m.theta - e.theta).abs()).max(angle_gap(m.phi, e.phi));
    }
    let mut linear: f64 = 0.0;
    for sphere in [Sign::Plus, Sign::Minus] {
        for j in 0..=8 {
            let p = SpherePoint::new(PI * j as f64 / 8.0, 0.0, sphere)?;
            let u = coeff_from_point(&p);
            for _ in 0..50 {
                let (x, y) = (rng.random_range(-2.0..2.0), rng.random_range(-2.0..2.0));
                let [ex, ey] = u.eval_at(&cfg.beam, x, y);
                linear = linear.max((ex.conj() * ey).im.abs());
            }
        }
    }
    let off = SpherePoint::new(1.0, 0.3, Sign::Plus)?;
    let rules_reject = matches!(allowed_transform(&off, TransformRule::A), Err(Error::ForbiddenTransform { .. }))
        && matches!(allowed_transform(&off, TransformRule::B), Err(Error::ForbiddenTransform { .. }));
    let quarter_ok = (0..4).all(|q| {
        let p = SpherePoint::new(1.0, q as f64 * PI / 2.0, Sign::Minus).expect("valid point");
        allowed_transform(&p, TransformRule::A).is_ok() && allowed_transform(&p, TransformRule::B).is_ok()
    });
    let rule_c_total = (0..16).all(|j| {
        let p = SpherePoint::new(1.0, 0.37 * j as f64, Sign::Plus).expect("valid point");
        allowed_transform(&p, TransformRule::C).is_ok()
    });
    Ok(vec![
        Check::at_most("hps.roundtrip", roundtrip, tol.get("sphere_roundtrip")),
        Check::at_most("hps.purity", purity, tol.get("purity")),
        Check::at_most("hps.meridian_linear", linear, tol.get("linearity")),
        Check::at_most("hps.mirror_swap", mirror, tol.get("sphere_roundtrip")),
        Check::holds("hps.rules_ab_reject_off_grid", rules_reject),
        Check::holds("hps.rules_ab_accept_quarter_grid", quarter_ok),
        Check::holds("hps.rule_c_total", rule_c_total),
    ])
}

fn elements(cfg: &RunConfig) -> Result<Vec<Check>> {
    let tol = &cfg.tol;
    let sym = |t: &Transform4| symmetry_check(t, &DEFAULT_PHI_SAMPLES, DEFAULT_SYMMETRY_TOL);
    let mut rng = ChaCha8Rng::seed_from_u64(SEED + 2);
    let hwp = sym(&lift(&jones_hwp(0.0)))?.class;
    let circ_l = sym(&lift(&jones_circular(Handedness::Left)))?.class;
    let circ_r = sym(&lift(&jones_circular(Handedness::Right)))?.class;
    let mut rot_res: f64 = 0.0;
    let mut ref_res: f64 = 0.0;
    let mut not_breaking = 0usize;
    for _ in 0..100 {
        let (m1, m2, p1, p2) = (rand_c(&mut rng), rand_c(&mut rng), rand_c(&mut rng), rand_c(&mut rng));
        let t = tensor_transform(
            &ElementMatrix2::new(Mat2::new(m1, m2, -m2, m1), ElementKind::Spatial),
            &ElementMatrix2::new(Mat2::new(p1, p2, -p2, p1), ElementKind::Polarization),
        )?;
        let r = sym(&t)?;
        rot_res = rot_res.max(r.kernel_residual_plus).max(r.kernel_residual_minus);
        let (m1, m2, p1, p2) = (rand_c(&mut rng), rand_c(&mut rng), rand_c(&mut rng), rand_c(&mut rng));
        let t = tensor_transform(
            &spatial_flip(m1, m2),
            &ElementMatrix2::new(Mat2::new(p1, p2, p2, -p1), ElementKind::Polarization),
        )?;
        let r = sym(&t)?;
        ref_res = ref_res.max(r.kernel_residual_plus).max(r.kernel_residual_minus);
        let mut m = Mat4::zero();
        m.0.iter_mut().flatten().for_each(|z| *z = rand_c(&mut rng));
        if sym(&Transform4::new(m, "random"))?.class != SymmetryClass::Breaks {
            not_breaking += 1;
        }
    }
    let mut equator: f64 = 0.0;
    let u = cpm_basis(CpmLabel::RadialPlus);
    for j in 0..=32 {
        let out = two_hwp(PI * j as f64 / 32.0).apply(&u);
        let comp = superselect(&out).plus;
        let st = hybrid_stokes(comp.a, comp.b, Sign::Plus)?;
        equator = equator.max(st.s3.abs() / st.s0).max((1.0 - comp.weight).abs());
    }
    Ok(vec![
        Check::holds("elements.hwp0_swaps_spheres", hwp == SymmetryClass::SwapsSpheres),
        Check::holds(
            "elements.circular_polarizer_preserves_both",
            circ_l == SymmetryClass::PreservesBoth && circ_r == SymmetryClass::PreservesBoth,
        ),
        Check::at_most("elements.rotational_pairs_kernel", rot_res, tol.get("kernel")),
        Check::at_most("elements.reflective_pairs_kernel", ref_res, tol.get("kernel")),
        Check::at_most("elements.generic_not_breaking", not_breaking as f64, 0.0),
        Check::at_most("elements.two_hwp_equator", equator, tol.get("symmetry")),
    ])
}

fn low_occupation_states(space: &crate::quantum::FockSpaceSpec) -> Vec<FockState> {
    let m = space.modes.len();
    vec![
        FockState::vacuum(space),
        FockState::basis(space, &vec![1; m]),
        FockState::basis(space, &(0..m).map(|i| i % 3).collect::<Vec<_>>()),
    ]
}

fn quantum(cfg: &RunConfig) -> Result<Vec<Check>> {
    let tol = &cfg.tol;
    let mut rng = ChaCha8Rng::seed_from_u64(SEED + 3);
    let four = cfg.four_mode_space();
    let two = cfg.two_mode_space();
    let mut out = Vec::new();

    // The commutator only needs low occupations, so a small cutoff keeps it cheap.
    let small = crate::quantum::FockSpaceSpec::four_mode(4)?;
    let states = low_occupation_states(&small);
    let mut comm: f64 = 0.0;
    for _ in 0..20 {
        let (a, b) = random_pair(&mut rng);
        let (a2, b2) = random_pair(&mut rng);
        let op = a_ab(&small, a2, b2)?.commutator(&a_ab(&small, a, b)?.adjoint());
        let want = a.conj() * a2 + b.conj() * b2;
        for st in &states {
            comm = comm.max((st.expectation(&op) - want).norm());
        }
    }
    out.push(Check::at_most("quantum.commutator", comm, tol.get("commutator")));

    let mut photon: f64 = 0.0;
    let mut signal: f64 = 0.0;
    for _ in 0..20 {
        let (a, b) = random_real_pair(&mut rng);
        let wf = photon_wavefunction(&single_photon(&four, a, b)?)?;
        photon = photon.max(wf.max_abs_diff(&make_uab(a, b, Sign::Plus)?.scale(c(0.5, 0.0))));
        let alpha = c(0.5, 0.0);
        let sig = coherent_signal(&coherent_state(&four, alpha, a, b)?, alpha)?;
        signal = signal.max(sig.max_abs_diff(&make_uab(a, b, Sign::Plus)?));
    }
    out.push(Check::at_most("quantum.photon_wavefunction", photon, tol.get("photon")));
    out.push(Check::at_most("quantum.coherent_signal", signal, tol.get("coherent_signal")));

    for s in [0.3, 0.7, 1.0] {
        let zeta = c(s, 0.0);
        let state = squeezed_state(&two, &[Squeezer::Two { modes: (3, 4), zeta }])?;
        let bound = tol.get("tmsv_amplitude").max(f64::tanh(s).powi(two.n_max as i32 + 1));
        let mut generator: f64 = 0.0;
        let mut magnitude: f64 = 0.0;
        let mut unsigned: f64 = 0.0;
        for n in 0..=two.n_max {
            let got = state.amplitude(&[n, n]);
            generator = generator.max((got - tmsv_amplitude(zeta, n)).norm());
            magnitude = magnitude.max((got.norm() - s.tanh().powi(n as i32) / s.cosh()).abs());
            let literal = c(s.tanh().powi(n as i32) / s.cosh(), 0.0);
            unsigned = unsigned.max((got - literal).norm());
        }
        out.push(Check::at_most(format!("quantum.tmsv_amplitude[s={s}]"), generator, bound));
        out.push(Check::at_most(format!("quantum.tmsv_magnitude[s={s}]"), magnitude, bound));
        out.push(Check::at_most(format!("quantum.tmsv_unsigned_form[s={s}]"), unsigned, bound).informational());
    }
    let state = squeezed_state(&two, &[Squeezer::Two { modes: (3, 4), zeta: c(1.0, 0.0) }])?;
    let (ch2, sh2) = (1f64.cosh().powi(2), 1f64.sinh().powi(2));
    let analytic = ch2 * ch2.ln() - sh2 * sh2.ln();
    out.push(Check::at_most(
        "quantum.tmsv_entropy",
        (entanglement_entropy(&state, &[3])? - analytic).abs(),
        tol.get("tmsv_entropy"),
    ));

    for z in [0.0, 0.1, 0.2] {
        let rep = factorization_residual(&two, c(z, 0.0))?;
        let check = Check::at_most(format!("quantum.factorization[zeta={z}]"), rep.max_residual(), tol.get("factorization_floor"));
        out.push(if z == 0.0 { check } else { check.informational() });
    }
    Ok(out)
}
