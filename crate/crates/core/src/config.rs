//! Run configuration: flat `key = value` files plus command-line overrides.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

use serde::Serialize;

use crate::modes::{BeamParams, GridSpec};
use crate::quantum::{FockSpaceSpec, DEFAULT_NMAX_2MODE, DEFAULT_NMAX_4MODE};
use crate::{Error, Result};

const DEFAULT_TOLERANCES: [(&str, f64); 23] = [
    ("commutator", 1e-12),
    ("coherent_signal", 1e-9),
    ("double_angle", 1e-12),
    ("factorization_floor", 1e-12),
    ("grid_rotation", 1e-6),
    ("helicity_closed", 1e-8),
    ("helicity_rel", 1e-6),
    ("kernel", 1e-10),
    ("linearity", 1e-10),
    ("orientation", 1e-6),
    ("p_sp", 1e-8),
    ("p_z", 1e-9),
    ("photon", 1e-12),
    ("purity", 1e-10),
    ("rotation", 1e-12),
    ("schmidt_k", 1e-12),
    ("schmidt_sep", 1e-9),
    ("sphere_roundtrip", 1e-9),
    ("symmetry", 1e-9),
    ("tam", 1e-8),
    ("tmsv_amplitude", 1e-8),
    ("tmsv_entropy", 1e-4),
    ("unit_norm", 1e-10),
];

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Tolerances(BTreeMap<String, f64>);

impl Default for Tolerances {
    fn default() -> Self {
        Tolerances(DEFAULT_TOLERANCES.iter().map(|(k, v)| (k.to_string(), *v)).collect())
    }
}

impl Tolerances {
    pub fn get(&self, name: &str) -> f64 {
        *self.0.get(name).unwrap_or_else(|| panic!("unknown tolerance '{name}'"))
    }

    pub fn set(&mut self, name: &str, value: f64) -> Result<()> {
        if !self.0.contains_key(name) {
            let known: Vec<&str> = self.0.keys().map(String::as_str).collect();
            return Err(Error::Config(format!("unknown tolerance '{name}' (known: {})", known.join(", "))));
        }
        if !(value > 0.0 && value.is_finite()) {
            return Err(Error::Config(format!("tolerance '{name}' must be positive, got {value}")));
        }
        self.0.insert(name.to_string(), value);
        Ok(())
    }

    pub fn names(&self) -> impl Iterator<Item = &str> {
        self.0.keys().map(String::as_str)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct FockConfig {
    pub n_max_4mode: usize,
    pub n_max_2mode: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct RunConfig {
    pub grid: GridSpec,
    pub beam: BeamParams,
    pub fock: FockConfig,
    pub tol: Tolerances,
    pub out: Option<PathBuf>,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            grid: GridSpec::default(),
            beam: BeamParams::default(),
            fock: FockConfig { n_max_4mode: DEFAULT_NMAX_4MODE, n_max_2mode: DEFAULT_NMAX_2MODE },
            tol: Tolerances::default(),
            out: None,
        }
    }
}

fn parse_num<T: std::str::FromStr>(key: &str, value: &str) -> Result<T> {
    value
        .parse()
        .map_err(|_| Error::Config(format!("invalid value '{value}' for '{key}'")))
}

impl RunConfig {
    pub fn set(&mut self, key: &str, value: &str) -> Result<()> {
        match key {
            "grid.n" => self.grid.n = parse_num(key, value)?,
            "grid.half_extent" => self.grid.half_extent = parse_num(key, value)?,
            "beam.w0" => self.beam.w0 = parse_num(key, value)?,
            "beam.k" => self.beam.k = parse_num(key, value)?,
            "fock.n_max_4mode" => self.fock.n_max_4mode = parse_num(key, value)?,
            "fock.n_max_2mode" => self.fock.n_max_2mode = parse_num(key, value)?,
            "out" => self.out = Some(PathBuf::from(value)),
            _ => match key.strip_prefix("tol.") {
                Some(name) => self.tol.set(name, parse_num(key, value)?)?,
                None => return Err(Error::Config(format!("unknown key '{key}'"))),
            },
        }
        Ok(())
    }

    /// Applies `key = value` lines; `#` starts a comment.
    pub fn apply_text(&mut self, text: &str) -> Result<()> {
        for (lineno, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (k, v) = line
                .split_once('=')
                .ok_or_else(|| Error::Config(format!("line {}: expected key = value", lineno + 1)))?;
            self.set(k.trim(), v.trim())
                .map_err(|e| Error::Config(format!("line {}: {e}", lineno + 1)))?;
        }
        Ok(())
    }

    pub fn from_file(path: &Path) -> Result<Self> {
        let mut cfg = RunConfig::default();
        cfg.apply_text(&std::fs::read_to_string(path)?)?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<()> {
        GridSpec::new(self.grid.n, self.grid.half_extent)?;
        BeamParams::new(self.beam.w0, self.beam.k)?;
        FockSpaceSpec::four_mode(self.fock.n_max_4mode)?;
        FockSpaceSpec::two_mode(self.fock.n_max_2mode)?;
        Ok(())
    }

    pub fn four_mode_space(&self) -> FockSpaceSpec {
        FockSpaceSpec::four_mode(self.fock.n_max_4mode).expect("validated")
    }

    pub fn two_mode_space(&self) -> FockSpaceSpec {
        FockSpaceSpec::two_mode(self.fock.n_max_2mode).expect("validated")
    }
}
