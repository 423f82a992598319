use nalgebra::DMatrix;

use super::FockState;
use crate::{Error, Result, C64};

/// Von Neumann entropy (nats) of the reduced state on `part` for a pure state.
///
/// The state is renormalized first; a norm deficit above `1e-6` is rejected.
pub fn entanglement_entropy(state: &FockState, part: &[u8]) -> Result<f64> {
    let norm = state.norm();
    if (norm - 1.0).abs() > 1e-6 {
        return Err(Error::NotPure(norm));
    }
    let space = &state.space;
    let mut left = Vec::new();
    for &m in part {
        left.push(space.position(m)?);
    }
    let right: Vec<usize> = (0..space.modes.len()).filter(|p| !left.contains(p)).collect();
    if left.is_empty() || right.is_empty() {
        return Ok(0.0);
    }
    let d = space.levels();
    let rows = d.pow(left.len() as u32);
    let cols = d.pow(right.len() as u32);
    let mut m = DMatrix::<C64>::zeros(rows, cols);
    for (idx, amp) in state.amps.iter().enumerate() {
        let occ = space.occupations(idx);
        let r = left.iter().fold(0, |acc, &p| acc * d + occ[p]);
        let c = right.iter().fold(0, |acc, &p| acc * d + occ[p]);
        m[(r, c)] = *amp / norm;
    }
    let sv = m.singular_values();
    Ok(sv
        .iter()
        .map(|s| s * s)
        .filter(|&p| p > 1e-300)
        .map(|p| -p * p.ln())
        .sum())
}
