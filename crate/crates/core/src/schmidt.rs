//! Schmidt decomposition over the spatial (x) polarization split.

use std::f64::consts::FRAC_1_SQRT_2;
use std::fmt;

use serde::Serialize;

use crate::algebra::Mat2;
use crate::modes::{Coeff4, CpmLabel, UNIT_NORM_TOL};
use crate::{Error, Result, C64};

/// `C[i][j]` multiplies `psi_i e_j` with `psi_0 = psi10`, `psi_1 = psi01`, `e_0 = x`, `e_1 = y`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct CoeffMatrix2(pub Mat2);

impl CoeffMatrix2 {
    pub fn frobenius(&self) -> f64 {
        self.0.norm()
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SchmidtResult {
    /// Descending, summing to one.
    pub lambda: [f64; 2],
    pub pol_vecs: [[C64; 2]; 2],
    pub spat_vecs: [[C64; 2]; 2],
    #[serde(rename = "K")]
    pub k: f64,
}

impl SchmidtResult {
    /// `sum_k sqrt(lambda_k) s_k p_k^T`.
    pub fn reconstruct(&self) -> CoeffMatrix2 {
        let mut m = Mat2::ZERO;
        for k in 0..2 {
            let w = self.lambda[k].sqrt();
            for i in 0..2 {
                for j in 0..2 {
                    m.0[i][j] += self.spat_vecs[k][i] * self.pol_vecs[k][j] * w;
                }
            }
        }
        CoeffMatrix2(m)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum SeparabilityClass {
    Rank2,
    Separable,
    Intermediate,
}

impl fmt::Display for SeparabilityClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            SeparabilityClass::Rank2 => "Rank2",
            SeparabilityClass::Separable => "Separable",
            SeparabilityClass::Intermediate => "Intermediate",
        })
    }
}

pub fn coeff_matrix(c: &Coeff4) -> CoeffMatrix2 {
    CoeffMatrix2(Mat2::new(c.0[0], c.0[1], c.0[2], c.0[3]))
}

fn orthogonal_complement(v: [C64; 2]) -> [C64; 2] {
    [-v[1].conj(), v[0].conj()]
}

fn normalized(v: [C64; 2]) -> [C64; 2] {
    let n = (v[0].norm_sqr() + v[1].norm_sqr()).sqrt();
    [v[0] / n, v[1] / n]
}

/// Closed-form SVD via the eigenvectors of the Hermitian matrix `C C^dagger`.
pub fn schmidt_decompose(cm: &CoeffMatrix2) -> Result<SchmidtResult> {
    let fro = cm.frobenius();
    if !fro.is_finite() || (fro - 1.0).abs() > UNIT_NORM_TOL {
        return Err(Error::NotNormalized(fro));
    }
    let c = cm.0;
    let h = c * c.adjoint();
    let a = h.0[0][0].re;
    let d = h.0[1][1].re;
    let b = h.0[0][1];
    let tr = a + d;
    let det = a * d - b.norm_sqr();
    let disc = ((a - d).powi(2) + 4.0 * b.norm_sqr()).sqrt();
    let l1 = 0.5 * (tr + disc);
    let l2 = if l1 > 0.0 { (det / l1).max(0.0) } else { 0.0 };

    let cand1 = [b, C64::new(l1 - a, 0.0)];
    let cand2 = [C64::new(l1 - d, 0.0), b.conj()];
    let n1 = cand1[0].norm_sqr() + cand1[1].norm_sqr();
    let n2 = cand2[0].norm_sqr() + cand2[1].norm_sqr();
    let s1 = if n1.max(n2) <= 1e-28 * tr.max(1.0) {
        [C64::new(1.0, 0.0), C64::new(0.0, 0.0)]
    } else if n1 >= n2 {
        normalized(cand1)
    } else {
        normalized(cand2)
    };
    let s2 = orthogonal_complement(s1);

    let row = |s: [C64; 2]| -> [C64; 2] {
        [
            s[0].conj() * c.0[0][0] + s[1].conj() * c.0[1][0],
            s[0].conj() * c.0[0][1] + s[1].conj() * c.0[1][1],
        ]
    };
    let p1 = normalized(row(s1));
    let r2 = row(s2);
    let p2 = if (r2[0].norm_sqr() + r2[1].norm_sqr()).sqrt() > 1e-12 {
        normalized(r2)
    } else {
        orthogonal_complement(p1)
    };

    let total = l1 + l2;
    let lambda = [l1 / total, l2 / total];
    let k = 1.0 / (lambda[0].powi(2) + lambda[1].powi(2));
    Ok(SchmidtResult { lambda, pol_vecs: [p1, p2], spat_vecs: [s1, s2], k })
}

pub fn schmidt_of(c: &Coeff4) -> Result<SchmidtResult> {
    schmidt_decompose(&coeff_matrix(c))
}

pub fn separability_class(a: C64, b: C64, tol: f64) -> Result<SeparabilityClass> {
    let n = (a.norm_sqr() + b.norm_sqr()).sqrt();
    if !n.is_finite() || (n - 1.0).abs() > UNIT_NORM_TOL {
        return Err(Error::NotNormalized(n));
    }
    let i = C64::i();
    Ok(if (a * b.conj()).im.abs() < tol {
        SeparabilityClass::Rank2
    } else if (a - i * b).norm() < tol || (a + i * b).norm() < tol {
        SeparabilityClass::Separable
    } else {
        SeparabilityClass::Intermediate
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum BellState {
    PhiPlus,
    PhiMinus,
    PsiPlus,
    PsiMinus,
}

impl BellState {
    /// Over `|0_A 0_B>, |0_A 1_B>, |1_A 0_B>, |1_A 1_B>`.
    pub fn vector(self) -> [C64; 4] {
        let s = FRAC_1_SQRT_2;
        let v = match self {
            BellState::PhiPlus => [s, 0.0, 0.0, s],
            BellState::PhiMinus => [s, 0.0, 0.0, -s],
            BellState::PsiPlus => [0.0, s, s, 0.0],
            BellState::PsiMinus => [0.0, s, -s, 0.0],
        };
        v.map(|x| C64::new(x, 0.0))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct BellTag {
    pub sign: i8,
    pub state: BellState,
}

impl BellTag {
    pub fn vector(&self) -> [C64; 4] {
        self.state.vector().map(|z| z * f64::from(self.sign))
    }
}

impl fmt::Display for BellTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = if self.sign < 0 { "-" } else { "+" };
        let name = match self.state {
            BellState::PhiPlus => "Phi+",
            BellState::PhiMinus => "Phi-",
            BellState::PsiPlus => "Psi+",
            BellState::PsiMinus => "Psi-",
        };
        write!(f, "{s}{name}")
    }
}

pub fn bell_label(label: CpmLabel) -> BellTag {
    let (sign, state) = match label {
        CpmLabel::RadialPlus => (1, BellState::PhiPlus),
        CpmLabel::AzimuthalPlus => (-1, BellState::PsiMinus),
        CpmLabel::RadialMinus => (-1, BellState::PhiMinus),
        CpmLabel::AzimuthalMinus => (1, BellState::PsiPlus),
    };
    BellTag { sign, state }
}

/// Reorders a mode into the two-qubit basis with qubit A = polarization, B = spatial.
pub fn bell_vector(c: &Coeff4) -> [C64; 4] {
    let mut out = [C64::new(0.0, 0.0); 4];
    for spatial in 0..2 {
        for pol in 0..2 {
            out[2 * pol + spatial] = c.0[2 * spatial + pol];
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::modes::{cpm_basis, make_uab, Sign};
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn c(re: f64, im: f64) -> C64 {
        C64::new(re, im)
    }

    fn random_unit(rng: &mut ChaCha8Rng) -> Coeff4 {
        let v = Coeff4::new([0; 4].map(|_| c(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0))));
        v.scale(c(1.0 / v.norm(), 0.0))
    }

    /// Brute-force oracle: eigenvalues of `C C^dagger` through nalgebra's Hermitian solver.
    fn oracle_lambda(cm: &CoeffMatrix2) -> [f64; 2] {
        let m = cm.0 * cm.0.adjoint();
        let h = nalgebra::Matrix2::new(m.0[0][0], m.0[0][1], m.0[1][0], m.0[1][1]);
        let ev = h.symmetric_eigenvalues();
        let (a, b) = (ev[0].max(ev[1]), ev[0].min(ev[1]));
        [a, b]
    }

    #[test]
    fn coeff_matrix_examples() {
        let s = FRAC_1_SQRT_2;
        let r = coeff_matrix(&cpm_basis(CpmLabel::RadialPlus));
        assert!((r.0 - Mat2::IDENTITY.scale(c(s, 0.0))).norm() < 1e-15);
        let a = coeff_matrix(&cpm_basis(CpmLabel::AzimuthalPlus));
        assert!((a.0 - Mat2::from_real([[0.0, s], [-s, 0.0]])).norm() < 1e-15);
        assert_eq!(coeff_matrix(&Coeff4::zero()).0, Mat2::ZERO);
    }

    #[test]
    fn cpm_modes_have_rank_two() {
        for l in CpmLabel::ALL {
            let r = schmidt_of(&cpm_basis(l)).unwrap();
            assert!((r.k - 2.0).abs() < 1e-12, "{l}: {}", r.k);
            assert!((r.lambda[0] - 0.5).abs() < 1e-12);
        }
    }

    #[test]
    fn circular_lg_is_separable() {
        for a in [c(0.0, FRAC_1_SQRT_2), c(0.0, -FRAC_1_SQRT_2)] {
            let r = schmidt_of(&make_uab(a, c(FRAC_1_SQRT_2, 0.0), Sign::Plus).unwrap()).unwrap();
            assert!((r.k - 1.0).abs() < 1e-9);
            assert!(r.lambda[1].abs() < 1e-12);
        }
    }

    #[test]
    fn intermediate_value() {
        let u = make_uab(c(0.5, 0.5), c(FRAC_1_SQRT_2, 0.0), Sign::Plus).unwrap();
        let cm = coeff_matrix(&u);
        let r = schmidt_decompose(&cm).unwrap();
        let sq2 = 2f64.sqrt();
        assert!((r.lambda[0] - (2.0 + sq2) / 4.0).abs() < 1e-12);
        assert!((r.lambda[1] - (2.0 - sq2) / 4.0).abs() < 1e-12);
        assert!((r.k - 4.0 / 3.0).abs() < 1e-9);
        let o = oracle_lambda(&cm);
        assert!((o[0] - r.lambda[0]).abs() < 1e-12 && (o[1] - r.lambda[1]).abs() < 1e-12);
    }

    #[test]
    fn rejects_unnormalized() {
        let cm = CoeffMatrix2(Mat2::IDENTITY);
        assert!(matches!(schmidt_decompose(&cm), Err(Error::NotNormalized(_))));
        assert!(separability_class(c(1.0, 0.0), c(1.0, 0.0), 1e-10).is_err());
    }

    #[test]
    fn reconstruction_and_oracle_on_random_inputs() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for _ in 0..1000 {
            let u = random_unit(&mut rng);
            let cm = coeff_matrix(&u);
            let r = schmidt_decompose(&cm).unwrap();
            assert!((r.reconstruct().0 - cm.0).norm() < 1e-10);
            assert!((r.lambda[0] + r.lambda[1] - 1.0).abs() < 1e-12);
            assert!(r.lambda[0] >= r.lambda[1] && r.lambda[1] >= 0.0);
            assert!((1.0..=2.0 + 1e-12).contains(&r.k));
            let o = oracle_lambda(&cm);
            assert!((o[0] - r.lambda[0]).abs() < 1e-10);
            for vecs in [r.pol_vecs, r.spat_vecs] {
                let ip = vecs[0][0].conj() * vecs[1][0] + vecs[0][1].conj() * vecs[1][1];
                assert!(ip.norm() < 1e-10);
            }
        }
    }

    #[test]
    fn product_states_and_degenerate_inputs() {
        // x-polarized psi10: already a product
        let r = schmidt_of(&Coeff4::from_real([1.0, 0.0, 0.0, 0.0])).unwrap();
        assert!((r.k - 1.0).abs() < 1e-15);
        assert!((r.reconstruct().0 - coeff_matrix(&Coeff4::from_real([1.0, 0.0, 0.0, 0.0])).0).norm() < 1e-15);
        let r = schmidt_of(&Coeff4::from_real([0.0, 0.0, 0.0, 1.0])).unwrap();
        assert!((r.reconstruct().0.0[1][1] - c(1.0, 0.0)).norm() < 1e-15);
    }

    #[test]
    fn separability_examples() {
        let s = FRAC_1_SQRT_2;
        let h = 3f64.sqrt() / 2.0;
        assert_eq!(separability_class(c(h, 0.0), c(0.5, 0.0), 1e-10).unwrap(), SeparabilityClass::Rank2);
        assert_eq!(separability_class(c(0.0, s), c(s, 0.0), 1e-10).unwrap(), SeparabilityClass::Separable);
        assert_eq!(separability_class(c(0.5, 0.5), c(s, 0.0), 1e-10).unwrap(), SeparabilityClass::Intermediate);
    }

    #[test]
    fn separability_matches_k() {
        let mut rng = ChaCha8Rng::seed_from_u64(8);
        for _ in 0..200 {
            let th: f64 = rng.random_range(0.0..std::f64::consts::PI);
            let ph: f64 = rng.random_range(0.0..std::f64::consts::TAU);
            let (a, b) = (c(th.cos(), 0.0), C64::from_polar(th.sin(), ph));
            let k = schmidt_of(&make_uab(a, b, Sign::Plus).unwrap()).unwrap().k;
            match separability_class(a, b, 1e-10).unwrap() {
                SeparabilityClass::Rank2 => assert!((k - 2.0).abs() < 1e-8),
                SeparabilityClass::Separable => assert!(k < 1.0 + 1e-8),
                SeparabilityClass::Intermediate => assert!(k > 1.0 && k < 2.0),
            }
        }
        let k = schmidt_of(&make_uab(c(0.6, 0.0), c(-0.8, 0.0), Sign::Minus).unwrap()).unwrap().k;
        assert!((k - 2.0).abs() < 1e-12);
    }

    #[test]
    fn local_unitaries_keep_k() {
        let mut rng = ChaCha8Rng::seed_from_u64(21);
        let unitary = |rng: &mut ChaCha8Rng| {
            let a = rng.random_range(0.0..6.0);
            let (p, q, r) = (rng.random_range(0.0..6.0), rng.random_range(0.0..6.0), rng.random_range(0.0..6.0));
            let (s, co) = f64::sin_cos(a);
            Mat2::new(
                C64::from_polar(co, p),
                C64::from_polar(s, q),
                -C64::from_polar(s, r - q),
                C64::from_polar(co, r - p),
            )
        };
        for _ in 0..200 {
            let u = random_unit(&mut rng);
            let cm = coeff_matrix(&u);
            let (us, up) = (unitary(&mut rng), unitary(&mut rng));
            let moved = CoeffMatrix2(us * cm.0 * up.transpose());
            let k0 = schmidt_decompose(&cm).unwrap().k;
            let k1 = schmidt_decompose(&moved).unwrap().k;
            assert!((k0 - k1).abs() < 1e-10);
        }
    }

    #[test]
    fn bell_correspondence() {
        for l in CpmLabel::ALL {
            let tag = bell_label(l);
            let v = bell_vector(&cpm_basis(l));
            for i in 0..4 {
                assert!((v[i] - tag.vector()[i]).norm() < 1e-15, "{l} -> {tag}");
            }
        }
        assert_eq!(bell_label(CpmLabel::RadialPlus).to_string(), "+Phi+");
        assert_eq!(bell_label(CpmLabel::AzimuthalPlus).to_string(), "-Psi-");
        for a in CpmLabel::ALL {
            for b in CpmLabel::ALL {
                let (va, vb) = (bell_label(a).vector(), bell_label(b).vector());
                let ip: C64 = (0..4).map(|i| va[i].conj() * vb[i]).sum();
                let want = if a == b { 1.0 } else { 0.0 };
                assert!((ip - want).norm() < 1e-15);
            }
        }
    }
}
