use std::f64::consts::FRAC_1_SQRT_2;

use super::{FockSpaceSpec, FockState, SparseOp};
use crate::modes::{Coeff4, UNIT_NORM_TOL};
use crate::{Error, Result, C64};

pub const MODE_NAMES: [(u8, &str); 4] = [(1, "x10"), (2, "y01"), (3, "x01"), (4, "y10")];

/// `(a, a^dagger)` for one mode of the space.
pub fn ladder(space: &FockSpaceSpec, mode: u8) -> Result<(SparseOp, SparseOp)> {
    let stride = space.stride(mode)?;
    let pos = space.position(mode)?;
    let mut entries = Vec::new();
    for idx in 0..space.dim() {
        let n = space.occupations(idx)[pos];
        if n > 0 {
            entries.push((idx - stride, idx, C64::new((n as f64).sqrt(), 0.0)));
        }
    }
    let a = SparseOp::from_triplets(space.dim(), entries, vec![mode]);
    let adag = a.adjoint();
    Ok((a, adag))
}

fn require_unit_pair(a: C64, b: C64) -> Result<()> {
    let n2 = a.norm_sqr() + b.norm_sqr();
    if (n2 - 1.0).abs() < UNIT_NORM_TOL {
        Ok(())
    } else {
        Err(Error::NotNormalized(n2))
    }
}

/// Weights `w_i` with `a_AB = sum_i w_i a_i`, for modes 1 to 4.
fn ab_weights(a: C64, b: C64) -> [C64; 4] {
    let s = FRAC_1_SQRT_2;
    [a * s, a * s, -b * s, b * s]
}

fn combine(space: &FockSpaceSpec, weights: [C64; 4]) -> Result<SparseOp> {
    let mut op = SparseOp::zero(space.dim());
    for (i, w) in weights.iter().enumerate() {
        if *w == C64::new(0.0, 0.0) {
            continue;
        }
        let (a, _) = ladder(space, i as u8 + 1)?;
        op = op.add(&a.scale(*w));
    }
    Ok(op)
}

/// Annihilator of the co-rotating mode `A u_R + B u_A`.
pub fn a_ab(space: &FockSpaceSpec, a: C64, b: C64) -> Result<SparseOp> {
    require_unit_pair(a, b)?;
    combine(space, ab_weights(a, b))
}

/// `sum_i xi_i* a_i` for a normalized 4-vector `xi`.
pub fn photon_ladder(space: &FockSpaceSpec, xi: [C64; 4]) -> Result<SparseOp> {
    let n2: f64 = xi.iter().map(|z| z.norm_sqr()).sum();
    if (n2 - 1.0).abs() >= UNIT_NORM_TOL {
        return Err(Error::NotNormalized(n2));
    }
    combine(space, xi.map(|z| z.conj()))
}

/// Product coherent state with mode amplitudes `alpha_i = conj(w_i) alpha`.
pub fn coherent_state(space: &FockSpaceSpec, alpha: C64, a: C64, b: C64) -> Result<FockState> {
    require_unit_pair(a, b)?;
    let load = alpha.norm_sqr() * a.norm_sqr().max(b.norm_sqr()) / 2.0;
    if load > space.n_max as f64 / 4.0 {
        return Err(Error::TruncationRisk(format!(
            "mean photons per mode {load:.3} exceed n_max/4 = {}",
            space.n_max as f64 / 4.0
        )));
    }
    let per_mode = ab_weights(a, b).map(|w| w.conj() * alpha);
    let mut mode_alpha = Vec::with_capacity(space.modes.len());
    for &m in &space.modes {
        mode_alpha.push(per_mode[m as usize - 1]);
    }
    for (i, z) in per_mode.iter().enumerate() {
        if *z != C64::new(0.0, 0.0) {
            space.position(i as u8 + 1)?;
        }
    }
    let levels = space.levels();
    let poisson: Vec<Vec<C64>> = mode_alpha
        .iter()
        .map(|&al| {
            let mut v = Vec::with_capacity(levels);
            let mut term = C64::new((-0.5 * al.norm_sqr()).exp(), 0.0);
            for n in 0..levels {
                if n > 0 {
                    term = term * al / (n as f64).sqrt();
                }
                v.push(term);
            }
            v
        })
        .collect();
    let amps = (0..space.dim())
        .map(|idx| {
            space
                .occupations(idx)
                .iter()
                .zip(&poisson)
                .map(|(&n, p)| p[n])
                .product()
        })
        .collect();
    Ok(FockState { space: space.clone(), amps })
}

/// Reference construction `exp(alpha a_AB^dagger - alpha* a_AB) |0>`.
pub fn coherent_state_by_expm(space: &FockSpaceSpec, alpha: C64, a: C64, b: C64) -> Result<FockState> {
    let ann = a_ab(space, a, b)?;
    let gen = ann.adjoint().scale(alpha).sub(&ann.scale(alpha.conj()));
    let vac = FockState::vacuum(space);
    Ok(FockState { space: space.clone(), amps: gen.expm_action(&vac.amps) })
}

fn four_mode_vector(space: &FockSpaceSpec, per_mode: impl Fn(u8) -> Result<C64>) -> Result<Coeff4> {
    for m in 1..=4 {
        space.position(m)?;
    }
    // x(v1 psi10 + v3 psi01) + y(v4 psi10 + v2 psi01)
    Ok(Coeff4::new([per_mode(1)?, per_mode(4)?, per_mode(3)?, per_mode(2)?]))
}

/// Classical field carried by a coherent state: `<a_i> / alpha` arranged as a mode.
pub fn coherent_signal(state: &FockState, alpha: C64) -> Result<Coeff4> {
    if alpha == C64::new(0.0, 0.0) {
        return Err(Error::InvalidArgument("coherent signal needs a nonzero amplitude".into()));
    }
    let n2 = state.norm().powi(2);
    if n2 == 0.0 {
        return Err(Error::ZeroField);
    }
    four_mode_vector(&state.space, |m| {
        let (a, _) = ladder(&state.space, m)?;
        Ok(state.expectation(&a) / n2 / alpha)
    })
}

/// `a_AB^dagger |0>`.
pub fn single_photon(space: &FockSpaceSpec, a: C64, b: C64) -> Result<FockState> {
    let create = a_ab(space, a, b)?.adjoint();
    let vac = FockState::vacuum(space);
    Ok(FockState { space: space.clone(), amps: create.apply(&vac.amps) })
}

/// `<0| E^+ |psi>` as mode coefficients, with the factor one half of the field operator.
pub fn photon_wavefunction(state: &FockState) -> Result<Coeff4> {
    let space = &state.space;
    let v = four_mode_vector(space, |m| {
        let mut occ = vec![0; space.modes.len()];
        occ[space.position(m)?] = 1;
        Ok(state.amplitude(&occ))
    })?;
    Ok(v.scale(C64::new(0.5, 0.0)))
}
