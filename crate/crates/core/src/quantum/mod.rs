//! Truncated Fock-space layer.
//!
//! Mode labels follow `1 = x10`, `2 = y01`, `3 = x01`, `4 = y10` (polarization then
//! Hermite-Gauss indices). A space holds a subset of these modes, each truncated at
//! `n_max` photons; basis states are ordered with the first listed mode most significant.
//!
//! Displacements use `D(beta) = exp(beta a^dagger - beta* a)` throughout.

mod entropy;
mod ops;
mod sparse;
mod squeeze;

pub use entropy::entanglement_entropy;
pub use ops::{
    a_ab, coherent_signal, coherent_state, coherent_state_by_expm, ladder, photon_ladder,
    photon_wavefunction, single_photon, MODE_NAMES,
};
pub use sparse::SparseOp;
pub use squeeze::{
    factorization_residual, squeeze_azimuthal, squeeze_single, squeeze_two, squeezed_state,
    tmsv_amplitude, FactorizationReport, FactorizationRow, Squeezer, MAX_SQUEEZE,
};

use serde::Serialize;

use crate::{Error, Result, C64};

/// Default cutoff for the four-mode space. Six photons per mode leave a coherent
/// truncation error near `1e-9` at `alpha = 0.5`; ten bring it below `1e-15`.
pub const DEFAULT_NMAX_4MODE: usize = 10;
pub const DEFAULT_NMAX_2MODE: usize = 20;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FockSpaceSpec {
    pub modes: Vec<u8>,
    pub n_max: usize,
}

impl FockSpaceSpec {
    pub fn new(modes: Vec<u8>, n_max: usize) -> Result<Self> {
        if n_max < 2 {
            return Err(Error::InvalidArgument(format!("n_max must be at least 2, got {n_max}")));
        }
        if modes.is_empty() || modes.iter().any(|m| !(1..=4).contains(m)) {
            return Err(Error::InvalidArgument(format!("mode labels must be in 1..=4, got {modes:?}")));
        }
        let mut sorted = modes.clone();
        sorted.sort_unstable();
        sorted.dedup();
        if sorted.len() != modes.len() {
            return Err(Error::InvalidArgument(format!("repeated mode labels {modes:?}")));
        }
        Ok(FockSpaceSpec { modes, n_max })
    }

    pub fn four_mode(n_max: usize) -> Result<Self> {
        FockSpaceSpec::new(vec![1, 2, 3, 4], n_max)
    }

    /// Modes 3 and 4, the only ones touched by azimuthal squeezing.
    pub fn two_mode(n_max: usize) -> Result<Self> {
        FockSpaceSpec::new(vec![3, 4], n_max)
    }

    pub fn levels(&self) -> usize {
        self.n_max + 1
    }

    pub fn dim(&self) -> usize {
        self.levels().pow(self.modes.len() as u32)
    }

    pub fn position(&self, mode: u8) -> Result<usize> {
        self.modes
            .iter()
            .position(|&m| m == mode)
            .ok_or_else(|| Error::InvalidArgument(format!("mode {mode} is not part of this space")))
    }

    pub fn stride(&self, mode: u8) -> Result<usize> {
        let pos = self.position(mode)?;
        Ok(self.levels().pow((self.modes.len() - 1 - pos) as u32))
    }

    pub fn index(&self, occupations: &[usize]) -> usize {
        assert_eq!(occupations.len(), self.modes.len());
        occupations.iter().fold(0, |acc, &n| {
            assert!(n <= self.n_max);
            acc * self.levels() + n
        })
    }

    pub fn occupations(&self, mut index: usize) -> Vec<usize> {
        let d = self.levels();
        let mut occ = vec![0; self.modes.len()];
        for slot in occ.iter_mut().rev() {
            *slot = index % d;
            index /= d;
        }
        occ
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct FockState {
    pub space: FockSpaceSpec,
    pub amps: Vec<C64>,
}

impl FockState {
    pub fn vacuum(space: &FockSpaceSpec) -> FockState {
        FockState::basis(space, &vec![0; space.modes.len()])
    }

    pub fn basis(space: &FockSpaceSpec, occupations: &[usize]) -> FockState {
        let mut amps = vec![C64::new(0.0, 0.0); space.dim()];
        amps[space.index(occupations)] = C64::new(1.0, 0.0);
        FockState { space: space.clone(), amps }
    }

    pub fn norm(&self) -> f64 {
        self.amps.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt()
    }

    pub fn inner(&self, other: &FockState) -> C64 {
        self.amps.iter().zip(&other.amps).map(|(a, b)| a.conj() * b).sum()
    }

    pub fn expectation(&self, op: &SparseOp) -> C64 {
        let applied = op.apply(&self.amps);
        self.amps.iter().zip(&applied).map(|(a, b)| a.conj() * b).sum()
    }

    pub fn amplitude(&self, occupations: &[usize]) -> C64 {
        self.amps[self.space.index(occupations)]
    }

    /// Probability weight on states with any mode at the cutoff.
    pub fn truncation_leak(&self) -> f64 {
        self.amps
            .iter()
            .enumerate()
            .filter(|(i, _)| self.space.occupations(*i).contains(&self.space.n_max))
            .map(|(_, a)| a.norm_sqr())
            .sum()
    }

    pub fn mean_photon_number(&self) -> f64 {
        self.amps
            .iter()
            .enumerate()
            .map(|(i, a)| a.norm_sqr() * self.space.occupations(i).iter().sum::<usize>() as f64)
            .sum()
    }

    /// Largest total occupation carrying weight above `threshold`.
    pub fn max_occupation(&self, threshold: f64) -> usize {
        self.amps
            .iter()
            .enumerate()
            .filter(|(_, a)| a.norm_sqr() > threshold)
            .map(|(i, _)| self.space.occupations(i).into_iter().max().unwrap_or(0))
            .max()
            .unwrap_or(0)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn spec_validation_and_indexing() {
        assert!(FockSpaceSpec::new(vec![1, 2], 1).is_err());
        assert!(FockSpaceSpec::new(vec![1, 1], 4).is_err());
        assert!(FockSpaceSpec::new(vec![5], 4).is_err());
        let s = FockSpaceSpec::four_mode(3).unwrap();
        assert_eq!(s.dim(), 256);
        assert_eq!(s.stride(1).unwrap(), 64);
        assert_eq!(s.stride(4).unwrap(), 1);
        for i in [0, 17, 255] {
            assert_eq!(s.index(&s.occupations(i)), i);
        }
        assert!(FockSpaceSpec::two_mode(4).unwrap().stride(1).is_err());
    }

    #[test]
    fn basis_states() {
        let s = FockSpaceSpec::two_mode(3).unwrap();
        let v = FockState::vacuum(&s);
        assert_eq!(v.norm(), 1.0);
        assert_eq!(v.mean_photon_number(), 0.0);
        let b = FockState::basis(&s, &[3, 1]);
        assert_eq!(b.truncation_leak(), 1.0);
        assert_eq!(b.mean_photon_number(), 4.0);
        assert_eq!(v.inner(&b), C64::new(0.0, 0.0));
    }
}
