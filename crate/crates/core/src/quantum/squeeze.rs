use std::fmt;

use serde::Serialize;

use super::entropy::entanglement_entropy;
use super::ops::{a_ab, ladder};
use super::{FockSpaceSpec, FockState, SparseOp};
use crate::{Error, Result, C64};

/// Largest squeezing magnitude accepted at the default two-mode cutoff.
pub const MAX_SQUEEZE: f64 = 1.5;

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub enum Squeezer {
    /// `exp[(1/2) z* a_i^2 - (1/2) z a_i^dagger^2]`.
    Single { mode: u8, zeta: C64 },
    /// `exp[z* a_i a_j - z a_i^dagger a_j^dagger]`.
    Two { modes: (u8, u8), zeta: C64 },
    /// Single-mode squeezer of the azimuthal annihilator `a_A = (-a_3 + a_4)/sqrt 2`.
    Azimuthal { zeta: C64 },
}

impl Squeezer {
    pub fn zeta(&self) -> C64 {
        match *self {
            Squeezer::Single { zeta, .. } | Squeezer::Two { zeta, .. } | Squeezer::Azimuthal { zeta } => zeta,
        }
    }

    fn check(&self) -> Result<()> {
        let z = self.zeta();
        if !(z.norm() <= MAX_SQUEEZE) {
            return Err(Error::TruncationRisk(format!("|zeta| = {} exceeds {MAX_SQUEEZE}", z.norm())));
        }
        if let Squeezer::Two { modes: (i, j), .. } = *self {
            if i == j {
                return Err(Error::InvalidArgument(format!("two-mode squeezer needs distinct modes, got {i}")));
            }
        }
        Ok(())
    }

    /// The anti-Hermitian exponent.
    pub fn generator(&self, space: &FockSpaceSpec) -> Result<SparseOp> {
        self.check()?;
        let z = self.zeta();
        let half = C64::new(0.5, 0.0);
        let quadratic = |a: &SparseOp, b: &SparseOp, w: C64| -> SparseOp {
            let ann = a.mul(b).scale(z.conj() * w);
            let cre = b.adjoint().mul(&a.adjoint()).scale(z * w);
            ann.sub(&cre)
        };
        Ok(match *self {
            Squeezer::Single { mode, .. } => {
                let (a, _) = ladder(space, mode)?;
                quadratic(&a, &a, half)
            }
            Squeezer::Two { modes: (i, j), .. } => {
                let (ai, _) = ladder(space, i)?;
                let (aj, _) = ladder(space, j)?;
                quadratic(&ai, &aj, C64::new(1.0, 0.0))
            }
            Squeezer::Azimuthal { .. } => {
                let a = a_ab(space, C64::new(0.0, 0.0), C64::new(1.0, 0.0))?;
                quadratic(&a, &a, half)
            }
        })
    }

    pub fn apply(&self, space: &FockSpaceSpec, v: &[C64]) -> Result<Vec<C64>> {
        Ok(self.generator(space)?.expm_action(v))
    }

    /// The full unitary, assembled column by column from the exponential action.
    pub fn unitary(&self, space: &FockSpaceSpec) -> Result<SparseOp> {
        let g = self.generator(space)?;
        let dim = space.dim();
        let mut entries = Vec::new();
        let mut e = vec![C64::new(0.0, 0.0); dim];
        for col in 0..dim {
            e[col] = C64::new(1.0, 0.0);
            for (row, v) in g.expm_action(&e).into_iter().enumerate() {
                if v != C64::new(0.0, 0.0) {
                    entries.push((row, col, v));
                }
            }
            e[col] = C64::new(0.0, 0.0);
        }
        Ok(SparseOp::from_triplets(dim, entries, g.support.clone()))
    }
}

impl fmt::Display for Squeezer {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Squeezer::Single { mode, .. } => write!(f, "S{mode}"),
            Squeezer::Two { modes: (i, j), .. } => write!(f, "S{i}{j}"),
            Squeezer::Azimuthal { .. } => write!(f, "S_A"),
        }
    }
}

pub fn squeeze_single(space: &FockSpaceSpec, mode: u8, zeta: C64) -> Result<SparseOp> {
    Squeezer::Single { mode, zeta }.unitary(space)
}

pub fn squeeze_two(space: &FockSpaceSpec, modes: (u8, u8), zeta: C64) -> Result<SparseOp> {
    Squeezer::Two { modes, zeta }.unitary(space)
}

pub fn squeeze_azimuthal(space: &FockSpaceSpec, zeta: C64) -> Result<SparseOp> {
    Squeezer::Azimuthal { zeta }.unitary(space)
}

/// `ops[0] ops[1] ... |0>`, applying the last factor first.
pub fn squeezed_state(space: &FockSpaceSpec, ops: &[Squeezer]) -> Result<FockState> {
    let mut v = FockState::vacuum(space).amps;
    for op in ops.iter().rev() {
        v = op.apply(space, &v)?;
    }
    Ok(FockState { space: space.clone(), amps: v })
}

/// Two-mode squeezed vacuum amplitude on `|n>|n>` for `exp[z* a b - z a^dagger b^dagger]`:
/// `(-e^{i theta} tanh s)^n / cosh s` with `z = s e^{i theta}`.
pub fn tmsv_amplitude(zeta: C64, n: usize) -> C64 {
    let (s, theta) = zeta.to_polar();
    let ratio = -C64::from_polar(s.tanh(), theta);
    ratio.powi(n as i32) / s.cosh()
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct FactorizationRow {
    /// `minus_half` uses `S34(-zeta/2)`, `full` uses `S34(zeta)`.
    pub variant: &'static str,
    pub xi: C64,
    /// Operator product, leftmost acting last.
    pub order: String,
    pub residual: f64,
    pub entropy_34: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct FactorizationReport {
    pub zeta: C64,
    pub n_max: usize,
    /// Entropy across the (3|4) cut of `S_A(zeta)|0>`.
    pub target_entropy_34: f64,
    pub rows: Vec<FactorizationRow>,
}

impl FactorizationReport {
    pub fn max_residual(&self) -> f64 {
        self.rows.iter().map(|r| r.residual).fold(0.0, f64::max)
    }
}

const ORDERINGS: [[usize; 3]; 6] = [[0, 1, 2], [0, 2, 1], [1, 0, 2], [1, 2, 0], [2, 0, 1], [2, 1, 0]];

/// Compares `S_A(zeta)|0>` against `S3(zeta/2) S4(zeta/2) S34(xi)|0>` for both candidate
/// `xi` and every ordering of the three factors. Nothing here asserts equality.
pub fn factorization_residual(space: &FockSpaceSpec, zeta: C64) -> Result<FactorizationReport> {
    if !(zeta.norm() <= 1.0) {
        return Err(Error::TruncationRisk(format!("factorization harness limited to |zeta| <= 1, got {}", zeta.norm())));
    }
    let target = squeezed_state(space, &[Squeezer::Azimuthal { zeta }])?;
    let half = zeta * 0.5;
    let mut rows = Vec::new();
    for (variant, xi) in [("minus_half", -half), ("full", zeta)] {
        let factors = [
            Squeezer::Single { mode: 3, zeta: half },
            Squeezer::Single { mode: 4, zeta: half },
            Squeezer::Two { modes: (3, 4), zeta: xi },
        ];
        for order in ORDERINGS {
            let ops: Vec<Squeezer> = order.iter().map(|&k| factors[k]).collect();
            let state = squeezed_state(space, &ops)?;
            let residual = target
                .amps
                .iter()
                .zip(&state.amps)
                .map(|(a, b)| (a - b).norm_sqr())
                .sum::<f64>()
                .sqrt();
            rows.push(FactorizationRow {
                variant,
                xi,
                order: ops.iter().map(|o| o.to_string()).collect::<Vec<_>>().join(" "),
                residual,
                entropy_34: entanglement_entropy(&state, &[3])?,
            });
        }
    }
    Ok(FactorizationReport {
        zeta,
        n_max: space.n_max,
        target_entropy_34: entanglement_entropy(&target, &[3])?,
        rows,
    })
}
