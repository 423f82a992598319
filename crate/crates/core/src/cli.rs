//! The `cypol` command line.
//!
//! Exit codes: 0 success, 1 a gated verification check failed, 2 invalid input or
//! usage, 3 runtime failure (I/O, numerics).

use std::ffi::OsString;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use serde::Serialize;
use serde_json::json;

use crate::config::RunConfig;
use crate::elements::{classify_form, symmetry_check, Transform4, DEFAULT_FORM_TOL, DEFAULT_PHI_SAMPLES, DEFAULT_SYMMETRY_TOL};
use crate::hps::{allowed_transform, hybrid_stokes, mirror_swap, superselect, TransformRule};
use crate::modes::{cpm_basis, make_uab, Coeff4, CpmLabel, Sign, UNIT_NORM_TOL};
use crate::momentum::{helicity_sz, integrate, momentum_density, orbital_lz};
use crate::pipeline::{parse_elements, run as run_pipeline, sweep_last, Element, POINT_WEIGHT_FLOOR};
use crate::quantum::{
    coherent_signal, coherent_state, entanglement_entropy, factorization_residual, photon_wavefunction,
    single_photon, squeezed_state, tmsv_amplitude, FockState, Squeezer,
};
use crate::render::render;
use crate::report::{chop, to_sorted_json, write_atomic};
use crate::schmidt::{bell_vector, schmidt_of};
use crate::verify::{run_suite, Suite};
use crate::{Error, Result, C64};

pub const EXIT_OK: i32 = 0;
pub const EXIT_CHECK_FAILED: i32 = 1;
pub const EXIT_INVALID: i32 = 2;
pub const EXIT_RUNTIME: i32 = 3;

#[derive(Debug, Parser)]
#[command(name = "cypol", version, about = "Cylindrically polarized modes: rendering, invariants and quantum states")]
pub struct Cli {
    #[command(flatten)]
    pub global: GlobalArgs,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Args)]
pub struct GlobalArgs {
    /// Flat `key = value` configuration file.
    #[arg(long, global = true, value_name = "PATH")]
    pub config: Option<PathBuf>,
    /// Directory for output files.
    #[arg(long, global = true, value_name = "DIR")]
    pub out: Option<PathBuf>,
    /// Print the JSON report on stdout.
    #[arg(long, global = true)]
    pub json: bool,
    /// Grid samples per axis (even, at least 16)
    #[arg(long, global = true, value_name = "N")]
    pub grid_n: Option<usize>,
    /// Half width of the grid in units of w0.
    #[arg(long, global = true, value_name = "L")]
    pub half_extent: Option<f64>,
    /// Beam waist
    #[arg(long, global = true)]
    pub w0: Option<f64>,
    /// Wavenumber
    #[arg(long, global = true)]
    pub k: Option<f64>,
    /// Per-mode photon cutoff of the four-mode space.
    #[arg(long, global = true, value_name = "N")]
    pub nmax: Option<usize>,
    /// Per-mode photon cutoff of the two-mode squeezing space.
    #[arg(long = "nmax-2mode", global = true, value_name = "N")]
    pub nmax_2mode: Option<usize>,
    /// Tolerance override `NAME=VALUE`; `--tol-NAME VALUE` is accepted too.
    #[arg(long = "tol", global = true, value_name = "NAME=VALUE")]
    pub tol: Vec<String>,
}

#[derive(Debug, Args, Default)]
pub struct ModeArgs {
    /// Basis mode: R+, A+, R- or A-.
    #[arg(long, allow_hyphen_values = true)]
    pub label: Option<String>,
    /// Radial amplitude `re[,im]`.
    #[arg(long, allow_hyphen_values = true)]
    pub a: Option<String>,
    /// Azimuthal amplitude `re[,im]`.
    #[arg(long, allow_hyphen_values = true)]
    pub b: Option<String>,
    /// Sphere for `--a/--b`: + or -.
    #[arg(long, allow_hyphen_values = true, default_value = "+")]
    pub sphere: String,
    /// Raw coefficients: eight numbers `re1,im1,...,re4,im4`.
    #[arg(long, allow_hyphen_values = true)]
    pub coeff: Option<String>,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Intensity image (PPM) and polarization-ellipse field (JSON).
    Render(ModeArgs),
    /// Run an invariant suite; exit code 1 if a gated check fails.
    Verify {
        #[arg(default_value = "all")]
        suite: String,
    },
    /// Hybrid Stokes parameters and sphere points of a mode.
    Hps {
        #[command(flatten)]
        mode: ModeArgs,
        /// Apply transformation rule a, b or c to each sphere point.
        #[arg(long)]
        rule: Option<String>,
        /// Also report the mirror image on the other sphere.
        #[arg(long)]
        mirror: bool,
    },
    /// Polarization/spatial Schmidt decomposition.
    Schmidt(ModeArgs),
    /// Integrated linear and angular momentum on the grid.
    Momentum(ModeArgs),
    /// Optical-element utilities.
    Elements {
        #[command(subcommand)]
        action: ElementsCommand,
    },
    /// Truncated Fock-space computations.
    Quantum {
        #[command(subcommand)]
        action: QuantumCommand,
    },
    /// Apply an element stack to a mode and report every step.
    Pipeline {
        #[command(flatten)]
        mode: ModeArgs,
        /// Elements separated by `;`, e.g. `hwp:0;hwp:0.3`.
        #[arg(long, allow_hyphen_values = true, default_value = "")]
        elements: String,
        /// Sweep the last element's angle over [0, pi] in this many steps.
        #[arg(long)]
        sweep: Option<usize>,
    },
}

#[derive(Debug, Subcommand)]
pub enum ElementsCommand {
    /// Classify the composed stack against the rotation symmetry.
    Check {
        #[arg(long, allow_hyphen_values = true)]
        elements: String,
    },
}

#[derive(Debug, Subcommand)]
pub enum QuantumCommand {
    /// Coherent state of the mode `(A, B)` and its classical signal.
    Coherent {
        #[arg(long, allow_hyphen_values = true, default_value = "0.5")]
        alpha: String,
        #[arg(long, allow_hyphen_values = true, default_value = "1")]
        a: String,
        #[arg(long, allow_hyphen_values = true, default_value = "0")]
        b: String,
    },
    /// Single photon in the mode `(A, B)` and its wavefunction.
    Photon {
        #[arg(long, allow_hyphen_values = true, default_value = "1")]
        a: String,
        #[arg(long, allow_hyphen_values = true, default_value = "0")]
        b: String,
    },
    /// Squeezed vacuum in the two-mode space.
    Squeeze {
        #[arg(long, allow_hyphen_values = true, default_value = "0.5")]
        zeta: String,
        /// `two` (modes 3 and 4), `azimuthal`, `single3` or `single4`.
        #[arg(long, default_value = "two")]
        kind: String,
    },
    /// Residual table of the factorized azimuthal squeezer.
    Factorization {
        #[arg(long, allow_hyphen_values = true, default_value = "0.2")]
        zeta: String,
    },
}

/// Rewrites `--tol-NAME V` and `--tol-NAME=V` into `--tol NAME=V`.
pub fn preprocess_args<I: IntoIterator<Item = OsString>>(args: I) -> Vec<OsString> {
    let mut out = Vec::new();
    let mut iter = args.into_iter().peekable();
    while let Some(arg) = iter.next() {
        let Some(name) = arg.to_str().and_then(|s| s.strip_prefix("--tol-")) else {
            out.push(arg);
            continue;
        };
        out.push("--tol".into());
        if name.contains('=') {
            out.push(name.into());
        } else {
            let value = iter.next().map(|v| v.to_string_lossy().into_owned()).unwrap_or_default();
            out.push(format!("{name}={value}").into());
        }
    }
    out
}

pub fn parse_complex(s: &str) -> Result<C64> {
    let parts: Vec<&str> = s.split(',').map(str::trim).collect();
    let num = |p: &str| -> Result<f64> {
        p.parse::<f64>()
            .ok()
            .filter(|v| v.is_finite())
            .ok_or_else(|| Error::InvalidArgument(format!("invalid number '{p}' in '{s}'")))
    };
    match parts.as_slice() {
        [re] => Ok(C64::new(num(re)?, 0.0)),
        [re, im] => Ok(C64::new(num(re)?, num(im)?)),
        _ => Err(Error::InvalidArgument(format!("expected re or re,im, got '{s}'"))),
    }
}

fn parse_sign(s: &str) -> Result<Sign> {
    s.parse()
}

impl ModeArgs {
    pub fn resolve(&self) -> Result<Coeff4> {
        let given = [self.label.is_some(), self.a.is_some() || self.b.is_some(), self.coeff.is_some()];
        if given.iter().filter(|g| **g).count() > 1 {
            return Err(Error::InvalidArgument("give only one of --label, --a/--b, --coeff".into()));
        }
        if let Some(l) = &self.label {
            return Ok(cpm_basis(l.parse::<CpmLabel>()?));
        }
        if let Some(raw) = &self.coeff {
            let v = raw
                .split(',')
                .map(parse_complex)
                .collect::<Result<Vec<_>>>()?;
            if v.len() != 8 {
                return Err(Error::InvalidArgument(format!("--coeff takes 8 numbers, got {}", v.len())));
            }
            let c = Coeff4::new([0, 1, 2, 3].map(|i| C64::new(v[2 * i].re, v[2 * i + 1].re)));
            c.require_unit(UNIT_NORM_TOL)?;
            return Ok(c);
        }
        if self.a.is_some() || self.b.is_some() {
            let a = self.a.as_deref().map(parse_complex).transpose()?.unwrap_or_default();
            let b = self.b.as_deref().map(parse_complex).transpose()?.unwrap_or_default();
            return make_uab(a, b, parse_sign(&self.sphere)?);
        }
        Ok(cpm_basis(CpmLabel::RadialPlus))
    }
}

fn build_config(g: &GlobalArgs) -> Result<RunConfig> {
    let mut cfg = match &g.config {
        Some(p) => {
            let mut c = RunConfig::default();
            c.apply_text(&std::fs::read_to_string(p).map_err(|e| Error::Config(format!("{}: {e}", p.display())))?)?;
            c
        }
        None => RunConfig::default(),
    };
    let set = |cfg: &mut RunConfig, key: &str, v: Option<String>| -> Result<()> {
        match v {
            Some(v) => cfg.set(key, &v),
            None => Ok(()),
        }
    };
    set(&mut cfg, "grid.n", g.grid_n.map(|v| v.to_string()))?;
    set(&mut cfg, "grid.half_extent", g.half_extent.map(|v| v.to_string()))?;
    set(&mut cfg, "beam.w0", g.w0.map(|v| v.to_string()))?;
    set(&mut cfg, "beam.k", g.k.map(|v| v.to_string()))?;
    set(&mut cfg, "fock.n_max_4mode", g.nmax.map(|v| v.to_string()))?;
    set(&mut cfg, "fock.n_max_2mode", g.nmax_2mode.map(|v| v.to_string()))?;
    for t in &g.tol {
        let (name, value) = t
            .split_once('=')
            .ok_or_else(|| Error::Config(format!("--tol expects NAME=VALUE, got '{t}'")))?;
        cfg.set(&format!("tol.{}", name.trim()), value.trim())?;
    }
    if let Some(out) = &g.out {
        cfg.out = Some(out.clone());
    }
    cfg.validate()?;
    Ok(cfg)
}

fn exit_code_for(e: &Error) -> i32 {
    match e {
        Error::Io(_) | Error::Json(_) | Error::TruncationRisk(_) | Error::NotPure(_) => EXIT_RUNTIME,
        _ => EXIT_INVALID,
    }
}

/// What a command produced: a JSON document, extra files, and its exit status.
struct Outcome {
    name: &'static str,
    json: String,
    summary: String,
    files: Vec<(PathBuf, Vec<u8>)>,
    /// Whether `--out` also receives `<name>.json`.
    write_report: bool,
    code: i32,
}

impl Outcome {
    fn new<T: Serialize>(name: &'static str, value: &T, summary: String) -> Result<Outcome> {
        Ok(Outcome { name, json: to_sorted_json(value)?, summary, files: Vec::new(), write_report: true, code: EXIT_OK })
    }
}

pub fn run<I: IntoIterator<Item = OsString>>(args: I) -> i32 {
    let cli = match Cli::try_parse_from(preprocess_args(args)) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { EXIT_INVALID } else { EXIT_OK };
        }
    };
    match execute(&cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            exit_code_for(&e)
        }
    }
}

fn execute(cli: &Cli) -> Result<i32> {
    let cfg = build_config(&cli.global)?;
    let outcome = dispatch(&cli.command, &cfg)?;
    if let (Some(dir), true) = (&cfg.out, outcome.write_report) {
        write_atomic(&dir.join(format!("{}.json", outcome.name)), outcome.json.as_bytes())?;
    }
    for (path, bytes) in &outcome.files {
        write_atomic(path, bytes)?;
    }
    if cli.global.json {
        print!("{}", outcome.json);
    } else {
        print!("{}", outcome.summary);
    }
    Ok(outcome.code)
}

fn out_dir(cfg: &RunConfig) -> &Path {
    cfg.out.as_deref().unwrap_or(Path::new("."))
}

fn chop_c(z: C64) -> [f64; 2] {
    [chop(z.re), chop(z.im)]
}

fn dispatch(cmd: &Command, cfg: &RunConfig) -> Result<Outcome> {
    match cmd {
        Command::Render(mode) => cmd_render(mode, cfg),
        Command::Verify { suite } => cmd_verify(suite.parse()?, cfg),
        Command::Hps { mode, rule, mirror } => cmd_hps(mode, rule.as_deref(), *mirror),
        Command::Schmidt(mode) => cmd_schmidt(mode),
        Command::Momentum(mode) => cmd_momentum(mode, cfg),
        Command::Elements { action: ElementsCommand::Check { elements } } => cmd_elements_check(elements),
        Command::Quantum { action } => cmd_quantum(action, cfg),
        Command::Pipeline { mode, elements, sweep } => cmd_pipeline(mode, elements, *sweep),
    }
}

fn cmd_render(mode: &ModeArgs, cfg: &RunConfig) -> Result<Outcome> {
    let c = mode.resolve()?;
    let r = render(&c, &cfg.beam, &cfg.grid)?;
    let dir = out_dir(cfg);
    let doc = json!({
        "coeff": c,
        "grid": cfg.grid,
        "beam": cfg.beam,
        "ellipse_stride": crate::render::ELLIPSE_STRIDE,
        "ellipses": r.ellipses,
        "max_intensity": r.max_intensity,
        "ring_peak_radius": r.ring_peak_radius,
    });
    let mut out = Outcome::new(
        "render",
        &doc,
        format!(
            "wrote {} and {}\nring peak radius {}\n",
            dir.join("intensity.ppm").display(),
            dir.join("ellipses.json").display(),
            r.ring_peak_radius
        ),
    )?;
    out.files.push((dir.join("intensity.ppm"), r.ppm));
    out.files.push((dir.join("ellipses.json"), out.json.clone().into_bytes()));
    out.write_report = false;
    Ok(out)
}

fn cmd_verify(suite: Suite, cfg: &RunConfig) -> Result<Outcome> {
    let report = run_suite(suite, cfg)?;
    let mut summary = String::new();
    for c in &report.checks {
        let tag = match (c.pass, c.gating) {
            (true, _) => "PASS",
            (false, true) => "FAIL",
            (false, false) => "INFO",
        };
        summary.push_str(&format!("{tag} {} value={:e} tol={:e}\n", c.name, c.value, c.tolerance));
    }
    summary.push_str(&format!("{}: {}\n", suite, if report.pass { "pass" } else { "FAIL" }));
    let mut out = Outcome::new("verify", &report, summary)?;
    out.code = if report.pass { EXIT_OK } else { EXIT_CHECK_FAILED };
    Ok(out)
}

fn cmd_hps(mode: &ModeArgs, rule: Option<&str>, mirror: bool) -> Result<Outcome> {
    let c = mode.resolve()?;
    let sel = superselect(&c);
    let rule: Option<TransformRule> = rule.map(str::parse).transpose()?;
    let mut spheres = serde_json::Map::new();
    let mut summary = String::new();
    for sign in [Sign::Plus, Sign::Minus] {
        let comp = sel.component(sign);
        let mut entry = json!({ "weight": comp.weight, "a": comp.a, "b": comp.b });
        if comp.weight > POINT_WEIGHT_FLOOR {
            let stokes = hybrid_stokes(comp.a, comp.b, sign)?;
            let point = comp.point(sign)?;
            entry["stokes"] = json!(stokes);
            entry["point"] = json!(point);
            entry["axes"] = json!(point.axes());
            summary.push_str(&format!(
                "sphere {sign}: weight {} theta {} phi {}\n",
                comp.weight, point.theta, point.phi
            ));
            if let Some(r) = rule {
                entry["rule"] = match allowed_transform(&point, r) {
                    Ok(p) => json!({ "rule": r.to_string(), "image": p }),
                    Err(e) => json!({ "rule": r.to_string(), "error": e.to_string() }),
                };
            }
            if mirror {
                entry["mirror"] = json!(mirror_swap(&point));
            }
        }
        spheres.insert(sign.to_string(), entry);
    }
    Outcome::new("hps", &json!({ "coeff": c, "spheres": spheres }), summary)
}

fn cmd_schmidt(mode: &ModeArgs) -> Result<Outcome> {
    let c = mode.resolve()?;
    let s = schmidt_of(&c)?;
    let summary = format!("K = {}\nlambda = {:?}\n", s.k, s.lambda);
    Outcome::new("schmidt", &json!({ "coeff": c, "schmidt": s, "bell_vector": bell_vector(&c) }), summary)
}

fn cmd_momentum(mode: &ModeArgs, cfg: &RunConfig) -> Result<Outcome> {
    let c = mode.resolve()?;
    let r = integrate(&momentum_density(&c, &cfg.beam, &cfg.grid)?);
    let hel = helicity_sz(&c, &cfg.beam)?;
    let lz = orbital_lz(&c, &cfg.beam)?;
    let summary = format!("P = {:?}\nL = {:?}\nS = {:?}\nJ = {:?}\n", r.p, r.l, r.s, r.j);
    Outcome::new(
        "momentum",
        &json!({ "coeff": c, "integrals": r, "helicity_sz_closed_form": hel, "orbital_lz_closed_form": lz }),
        summary,
    )
}

fn cmd_elements_check(list: &str) -> Result<Outcome> {
    let elements = parse_elements(list)?;
    let mut total = Transform4::identity();
    let mut items = Vec::new();
    for e in &elements {
        let t = e.transform();
        let m = element_matrix(e);
        items.push(json!({ "element": e, "form": classify_form(&m, DEFAULT_FORM_TOL) }));
        total = total.then(&t);
    }
    let rep = symmetry_check(&total, &DEFAULT_PHI_SAMPLES, DEFAULT_SYMMETRY_TOL)?;
    let summary = format!("class {}\n", rep.class);
    Outcome::new("elements", &json!({ "elements": items, "symmetry": rep }), summary)
}

fn element_matrix(e: &Element) -> crate::algebra::Mat2 {
    use crate::elements::{jones_circular, jones_hwp, jones_qwp, spatial_flip, spatial_rotation};
    match *e {
        Element::Hwp(a) => jones_hwp(a).matrix,
        Element::Qwp(a) => jones_qwp(a).matrix,
        Element::CircPol(h) => jones_circular(h).matrix,
        Element::SpatialRot(p) => spatial_rotation(p).matrix,
        Element::SpatialFlip(m1, m2) => spatial_flip(m1, m2).matrix,
    }
}

fn amplitude_table(state: &FockState) -> Vec<serde_json::Value> {
    state
        .amps
        .iter()
        .enumerate()
        .filter(|(_, a)| a.norm() >= 1e-12)
        .map(|(i, a)| json!({ "occupations": state.space.occupations(i), "amplitude": chop_c(*a) }))
        .collect()
}

fn cmd_quantum(action: &QuantumCommand, cfg: &RunConfig) -> Result<Outcome> {
    match action {
        QuantumCommand::Coherent { alpha, a, b } => {
            let (alpha, a, b) = (parse_complex(alpha)?, parse_complex(a)?, parse_complex(b)?);
            let space = cfg.four_mode_space();
            let state = coherent_state(&space, alpha, a, b)?;
            let signal = coherent_signal(&state, alpha)?;
            let expected = make_uab(a.conj(), b.conj(), Sign::Plus)?;
            let doc = json!({
                "alpha": alpha, "a": a, "b": b, "n_max": space.n_max,
                "signal": signal,
                "expected_mode": expected,
                "deviation": signal.max_abs_diff(&expected),
                "mean_photon_number": state.mean_photon_number(),
                "truncation_leak": state.truncation_leak(),
                "norm": state.norm(),
            });
            Outcome::new("quantum", &doc, format!("deviation from classical mode {:e}\n", signal.max_abs_diff(&expected)))
        }
        QuantumCommand::Photon { a, b } => {
            let (a, b) = (parse_complex(a)?, parse_complex(b)?);
            let space = cfg.four_mode_space();
            let state = single_photon(&space, a, b)?;
            let wf = photon_wavefunction(&state)?;
            let expected = make_uab(a.conj(), b.conj(), Sign::Plus)?.scale(C64::new(0.5, 0.0));
            let doc = json!({
                "a": a, "b": b, "n_max": space.n_max,
                "wavefunction": wf,
                "expected": expected,
                "deviation": wf.max_abs_diff(&expected),
                "norm": state.norm(),
            });
            Outcome::new("quantum", &doc, format!("deviation from u_AB/2 {:e}\n", wf.max_abs_diff(&expected)))
        }
        QuantumCommand::Squeeze { zeta, kind } => {
            let zeta = parse_complex(zeta)?;
            let space = cfg.two_mode_space();
            let op = match kind.as_str() {
                "two" => Squeezer::Two { modes: (3, 4), zeta },
                "azimuthal" => Squeezer::Azimuthal { zeta },
                "single3" => Squeezer::Single { mode: 3, zeta },
                "single4" => Squeezer::Single { mode: 4, zeta },
                other => return Err(Error::InvalidArgument(format!("unknown squeezer '{other}'"))),
            };
            let state = squeezed_state(&space, &[op])?;
            let entropy = entanglement_entropy(&state, &[3])?;
            let mut doc = json!({
                "squeezer": op.to_string(), "zeta": zeta, "n_max": space.n_max,
                "amplitudes": amplitude_table(&state),
                "entropy_34": entropy,
                "norm": state.norm(),
                "mean_photon_number": state.mean_photon_number(),
                "truncation_leak": state.truncation_leak(),
            });
            if kind == "two" {
                let dev = (0..=space.n_max)
                    .map(|n| (state.amplitude(&[n, n]) - tmsv_amplitude(zeta, n)).norm())
                    .fold(0.0, f64::max);
                doc["tmsv_deviation"] = json!(dev);
            }
            Outcome::new("quantum", &doc, format!("entropy (3|4) {entropy}\n"))
        }
        QuantumCommand::Factorization { zeta } => {
            let zeta = parse_complex(zeta)?;
            let rep = factorization_residual(&cfg.two_mode_space(), zeta)?;
            let mut summary = String::new();
            for r in &rep.rows {
                summary.push_str(&format!("{:<10} {:<14} residual {:e}\n", r.variant, r.order, r.residual));
            }
            Outcome::new("quantum", &rep, summary)
        }
    }
}

fn cmd_pipeline(mode: &ModeArgs, list: &str, sweep: Option<usize>) -> Result<Outcome> {
    let c = mode.resolve()?;
    let elements = parse_elements(list)?;
    let traj = run_pipeline(&elements, &c)?;
    let mut summary = String::new();
    for step in &traj.steps {
        summary.push_str(&format!(
            "{} {}: {} (weights + {:.6}, - {:.6})\n",
            step.index, step.element, step.class, step.state.weight_plus, step.state.weight_minus
        ));
        for w in &step.warnings {
            eprintln!("warning: {w}");
        }
    }
    let doc = match sweep {
        Some(n) => json!({ "trajectory": traj, "sweep": sweep_last(&elements, &c, n)? }),
        None => json!({ "trajectory": traj }),
    };
    Outcome::new("pipeline", &doc, summary)
}
