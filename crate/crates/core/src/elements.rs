//! Optical elements as 2x2 operators on the polarization or spatial index, their
//! tensor lift to the 4-dimensional mode space, and the rotational-symmetry check.
//!
//! An element `T = M (x) P` keeps the co-rotating (or counter-rotating) modes in
//! their class iff the commutator `[G(phi), T]` annihilates that class for every
//! angle. This is a kernel condition, weaker than full commutation: both
//! rotation-like (`[[a, b], [-b, a]]`) and reflection-like (`[[a, b], [b, -a]]`)
//! pairs of `M` and `P` satisfy it.

use std::fmt;

use serde::Serialize;

use crate::algebra::{Mat2, Mat4};
use crate::modes::{cpm_basis, g_operator, Coeff4, CpmLabel, Sign};
use crate::{Error, Result, C64};

/// Angles used by [`symmetry_check`] when the caller has no preference.
pub const DEFAULT_PHI_SAMPLES: [f64; 3] = [0.37, 1.13, 2.71];

pub const DEFAULT_FORM_TOL: f64 = 1e-10;
pub const DEFAULT_SYMMETRY_TOL: f64 = 1e-9;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum ElementKind {
    Polarization,
    Spatial,
}

impl ElementKind {
    fn name(self) -> &'static str {
        match self {
            ElementKind::Polarization => "polarization",
            ElementKind::Spatial => "spatial",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Handedness {
    Left,
    Right,
}

/// A 2x2 operator acting on one factor of the mode space.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ElementMatrix2 {
    pub matrix: Mat2,
    pub kind: ElementKind,
}

impl ElementMatrix2 {
    pub fn new(matrix: Mat2, kind: ElementKind) -> Self {
        ElementMatrix2 { matrix, kind }
    }

    pub fn identity(kind: ElementKind) -> Self {
        ElementMatrix2::new(Mat2::IDENTITY, kind)
    }
}

/// Half-wave plate with its fast axis at `alpha` from the x axis.
pub fn jones_hwp(alpha: f64) -> ElementMatrix2 {
    let (s, c) = (2.0 * alpha).sin_cos();
    ElementMatrix2::new(Mat2::from_real([[c, s], [s, -c]]), ElementKind::Polarization)
}

/// Circular polarizer, `(1/2)[[1, +/-i], [-/+i, 1]]` with the upper sign for `Left`.
pub fn jones_circular(hand: Handedness) -> ElementMatrix2 {
    let s = match hand {
        Handedness::Left => 1.0,
        Handedness::Right => -1.0,
    };
    let m = Mat2::new(
        C64::new(0.5, 0.0),
        C64::new(0.0, 0.5 * s),
        C64::new(0.0, -0.5 * s),
        C64::new(0.5, 0.0),
    );
    ElementMatrix2::new(m, ElementKind::Polarization)
}

/// Quarter-wave retarder with fast axis at `alpha`: `R(alpha) diag(1, i) R(-alpha)`.
///
/// Standard retarder matrix, global phase dropped.
pub fn jones_qwp(alpha: f64) -> ElementMatrix2 {
    let r = rot(alpha);
    let d = Mat2::new(C64::new(1.0, 0.0), C64::new(0.0, 0.0), C64::new(0.0, 0.0), C64::new(0.0, 1.0));
    ElementMatrix2::new(r * d * rot(-alpha), ElementKind::Polarization)
}

/// Rotation of the spatial mode pair `(psi10, psi01)` by `phi`.
pub fn spatial_rotation(phi: f64) -> ElementMatrix2 {
    ElementMatrix2::new(rot(phi), ElementKind::Spatial)
}

/// Reflection-like spatial operator `[[m1, m2], [m2, -m1]]`.
pub fn spatial_flip(m1: C64, m2: C64) -> ElementMatrix2 {
    ElementMatrix2::new(Mat2::new(m1, m2, m2, -m1), ElementKind::Spatial)
}

fn rot(phi: f64) -> Mat2 {
    crate::modes::rotation_matrix(phi).to_mat2()
}

/// The two matrix families that respect the rotation law.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum MatrixForm {
    /// `[[a, b], [-b, a]]`: commutes with every rotation.
    Rotational,
    /// `[[a, b], [b, -a]]`: reflection-like.
    Reflective,
    Neither,
}

impl fmt::Display for MatrixForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            MatrixForm::Rotational => "rotational",
            MatrixForm::Reflective => "reflective",
            MatrixForm::Neither => "neither",
        })
    }
}

/// Matrices matching both forms (only the zero matrix) report `Rotational`.
pub fn classify_form(e: &Mat2, tol: f64) -> MatrixForm {
    let m = &e.0;
    if (m[0][0] - m[1][1]).norm() < tol && (m[0][1] + m[1][0]).norm() < tol {
        MatrixForm::Rotational
    } else if (m[0][0] + m[1][1]).norm() < tol && (m[0][1] - m[1][0]).norm() < tol {
        MatrixForm::Reflective
    } else {
        MatrixForm::Neither
    }
}

/// 4x4 operator on the coefficient space with a free-form description of where it came from.
#[derive(Clone, Debug, PartialEq)]
pub struct Transform4 {
    pub matrix: Mat4,
    pub provenance: String,
}

impl Transform4 {
    pub fn new(matrix: Mat4, provenance: impl Into<String>) -> Self {
        Transform4 { matrix, provenance: provenance.into() }
    }

    pub fn identity() -> Self {
        Transform4::new(Mat4::identity(), "identity")
    }

    pub fn apply(&self, c: &Coeff4) -> Coeff4 {
        Coeff4(self.matrix.apply(&c.0))
    }

    /// `other` applied after `self`.
    pub fn then(&self, other: &Transform4) -> Transform4 {
        Transform4::new(
            other.matrix * self.matrix,
            format!("{} ; {}", self.provenance, other.provenance),
        )
    }

    pub fn is_unitary(&self, tol: f64) -> bool {
        self.matrix.unitarity_defect() < tol
    }
}

pub fn tensor_transform(spatial: &ElementMatrix2, pol: &ElementMatrix2) -> Result<Transform4> {
    if spatial.kind != ElementKind::Spatial {
        return Err(Error::KindMismatch { expected: "spatial", found: spatial.kind.name() });
    }
    if pol.kind != ElementKind::Polarization {
        return Err(Error::KindMismatch { expected: "polarization", found: pol.kind.name() });
    }
    Ok(Transform4::new(Mat4::kron(&spatial.matrix, &pol.matrix), "tensor"))
}

/// Lift a single element to the mode space (identity on the other factor).
pub fn lift(e: &ElementMatrix2) -> Transform4 {
    let m = match e.kind {
        ElementKind::Spatial => Mat4::kron(&e.matrix, &Mat2::IDENTITY),
        ElementKind::Polarization => Mat4::kron(&Mat2::IDENTITY, &e.matrix),
    };
    Transform4::new(m, e.kind.name())
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum SymmetryClass {
    PreservesPlus,
    PreservesMinus,
    PreservesBoth,
    SwapsSpheres,
    Breaks,
}

impl fmt::Display for SymmetryClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            SymmetryClass::PreservesPlus => "preserves_plus",
            SymmetryClass::PreservesMinus => "preserves_minus",
            SymmetryClass::PreservesBoth => "preserves_both",
            SymmetryClass::SwapsSpheres => "swaps_spheres",
            SymmetryClass::Breaks => "breaks",
        })
    }
}

/// Frobenius norms of the 2x2 blocks of `T` in the basis `(R+, A+, R-, A-)`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct BlockNorms {
    pub plus_to_plus: f64,
    pub plus_to_minus: f64,
    pub minus_to_plus: f64,
    pub minus_to_minus: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SymmetryReport {
    pub class: SymmetryClass,
    /// `max || [G+(phi), T] c ||` over the angles and `c in {R+, A+}`.
    pub kernel_residual_plus: f64,
    /// Same for `G-` and `{R-, A-}`.
    pub kernel_residual_minus: f64,
    /// For swapped images: how far `T c` is from obeying the opposite rotation law.
    pub swap_residual: f64,
    /// Auxiliary: `max ||[G(phi), T]||_F`, zero only under full commutation.
    pub full_commutator_plus: f64,
    pub full_commutator_minus: f64,
    pub blocks: BlockNorms,
    pub unitary: bool,
}

/// Basis change to `(R+, A+, R-, A-)`; columns are the CPM coefficient vectors.
fn cpm_frame() -> Mat4 {
    let mut u = Mat4::zero();
    for (col, label) in CpmLabel::ALL.iter().enumerate() {
        let v = cpm_basis(*label);
        for row in 0..4 {
            u.0[row][col] = v.0[row];
        }
    }
    u
}

pub fn block_norms(t: &Mat4) -> BlockNorms {
    let u = cpm_frame();
    let b = u.adjoint() * *t * u;
    let block = |r0: usize, c0: usize| -> f64 {
        let mut s = 0.0;
        for r in r0..r0 + 2 {
            for c in c0..c0 + 2 {
                s += b.0[r][c].norm_sqr();
            }
        }
        s.sqrt()
    };
    BlockNorms {
        plus_to_plus: block(0, 0),
        plus_to_minus: block(2, 0),
        minus_to_plus: block(0, 2),
        minus_to_minus: block(2, 2),
    }
}

pub fn symmetry_check(t: &Transform4, phis: &[f64], tol: f64) -> Result<SymmetryReport> {
    if phis.is_empty() {
        return Err(Error::InvalidArgument("symmetry check needs at least one angle".into()));
    }
    if !t.matrix.is_finite() {
        return Err(Error::InvalidArgument("transform has non-finite entries".into()));
    }
    let pair = |s: Sign| [cpm_basis(CpmLabel::radial(s)), cpm_basis(CpmLabel::azimuthal(s))];
    let mut kernel = [0.0f64; 2];
    let mut full = [0.0f64; 2];
    let mut swap: f64 = 0.0;
    for &phi in phis {
        for (slot, sign) in [Sign::Plus, Sign::Minus].into_iter().enumerate() {
            let g = g_operator(sign, phi).matrix;
            let comm = g.commutator(&t.matrix);
            full[slot] = full[slot].max(comm.norm());
            for c in pair(sign) {
                kernel[slot] = kernel[slot].max(Coeff4(comm.apply(&c.0)).norm());
                let image = Coeff4(t.matrix.apply(&c.0));
                let other = g_operator(sign.flip(), phi);
                swap = swap.max((other.apply(&image) - image).norm());
            }
        }
    }

    let blocks = block_norms(&t.matrix);
    let thr = tol * t.matrix.norm().max(1.0);
    let plus_kept = blocks.plus_to_minus < thr;
    let minus_kept = blocks.minus_to_plus < thr;
    let class = if plus_kept && minus_kept {
        SymmetryClass::PreservesBoth
    } else if blocks.plus_to_plus < thr && blocks.minus_to_minus < thr {
        SymmetryClass::SwapsSpheres
    } else if plus_kept {
        SymmetryClass::PreservesPlus
    } else if minus_kept {
        SymmetryClass::PreservesMinus
    } else {
        SymmetryClass::Breaks
    };

    Ok(SymmetryReport {
        class,
        kernel_residual_plus: kernel[0],
        kernel_residual_minus: kernel[1],
        swap_residual: swap,
        full_commutator_plus: full[0],
        full_commutator_minus: full[1],
        blocks,
        unitary: t.is_unitary(1e-10),
    })
}

/// The mirror operation between the two spheres: a half-wave plate at 0 on every point.
pub fn mirror_transform() -> Transform4 {
    let mut t = lift(&jones_hwp(0.0));
    t.provenance = "hwp(0)".into();
    t
}

/// Two half-wave plates, the first fixed at 0 and the second at `beta`: a polarization
/// rotation by `2 beta`, which moves co-rotating modes along the equator.
pub fn two_hwp(beta: f64) -> Transform4 {
    let p = jones_hwp(beta).matrix * jones_hwp(0.0).matrix;
    Transform4::new(Mat4::kron(&Mat2::IDENTITY, &p), format!("hwp(0) ; hwp({beta})"))
}
