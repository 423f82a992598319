//! First-order Hermite-Gauss vector modes.
//!
//! A mode is stored as four complex coefficients over the ordered basis
//! `B = (psi10 x, psi10 y, psi01 x, psi01 y)`; index `2*i + j` carries spatial
//! index `i` (0 = psi10, 1 = psi01) and polarization index `j` (0 = x, 1 = y).
//! All fields are taken at `z = 0` and modulo the common factor `exp(-i chi)`.
//!
//! The scalar modes are normalized on the plane:
//! `psi10 = sqrt(8/pi) x exp(-(x^2+y^2)/w0^2) / w0^2`, so that
//! `integral |psi10|^2 dx dy = 1` for every waist.

use std::f64::consts::{FRAC_1_SQRT_2, PI};
use std::fmt;
use std::ops::{Add, Index, Mul, Sub};
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::algebra::{Mat2, Mat4};
use crate::elements::Transform4;
use crate::{Error, Result, C64};

/// Tolerance on `|c|^2 - 1` for operations that require a unit-norm mode.
pub const UNIT_NORM_TOL: f64 = 1e-10;

/// Rotation class of a cylindrically polarized mode (co- or counter-rotating).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Sign {
    #[serde(rename = "+")]
    Plus,
    #[serde(rename = "-")]
    Minus,
}

impl Sign {
    pub fn value(self) -> f64 {
        match self {
            Sign::Plus => 1.0,
            Sign::Minus => -1.0,
        }
    }

    pub fn flip(self) -> Sign {
        match self {
            Sign::Plus => Sign::Minus,
            Sign::Minus => Sign::Plus,
        }
    }
}

impl fmt::Display for Sign {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Sign::Plus => "+",
            Sign::Minus => "-",
        })
    }
}

impl FromStr for Sign {
    type Err = Error;
    fn from_str(s: &str) -> Result<Sign> {
        match s.trim() {
            "+" | "plus" | "co" => Ok(Sign::Plus),
            "-" | "minus" | "counter" => Ok(Sign::Minus),
            other => Err(Error::InvalidArgument(format!("unknown sphere sign '{other}'"))),
        }
    }
}

/// The four cylindrically polarized basis modes.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum CpmLabel {
    #[serde(rename = "R+")]
    RadialPlus,
    #[serde(rename = "A+")]
    AzimuthalPlus,
    #[serde(rename = "R-")]
    RadialMinus,
    #[serde(rename = "A-")]
    AzimuthalMinus,
}

impl CpmLabel {
    pub const ALL: [CpmLabel; 4] = [
        CpmLabel::RadialPlus,
        CpmLabel::AzimuthalPlus,
        CpmLabel::RadialMinus,
        CpmLabel::AzimuthalMinus,
    ];

    pub fn sign(self) -> Sign {
        match self {
            CpmLabel::RadialPlus | CpmLabel::AzimuthalPlus => Sign::Plus,
            CpmLabel::RadialMinus | CpmLabel::AzimuthalMinus => Sign::Minus,
        }
    }

    pub fn radial(sign: Sign) -> CpmLabel {
        match sign {
            Sign::Plus => CpmLabel::RadialPlus,
            Sign::Minus => CpmLabel::RadialMinus,
        }
    }

    pub fn azimuthal(sign: Sign) -> CpmLabel {
        match sign {
            Sign::Plus => CpmLabel::AzimuthalPlus,
            Sign::Minus => CpmLabel::AzimuthalMinus,
        }
    }
}

impl fmt::Display for CpmLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            CpmLabel::RadialPlus => "R+",
            CpmLabel::AzimuthalPlus => "A+",
            CpmLabel::RadialMinus => "R-",
            CpmLabel::AzimuthalMinus => "A-",
        })
    }
}

impl FromStr for CpmLabel {
    type Err = Error;
    fn from_str(s: &str) -> Result<CpmLabel> {
        match s.trim() {
            "R+" | "r+" => Ok(CpmLabel::RadialPlus),
            "A+" | "a+" => Ok(CpmLabel::AzimuthalPlus),
            "R-" | "r-" => Ok(CpmLabel::RadialMinus),
            "A-" | "a-" => Ok(CpmLabel::AzimuthalMinus),
            other => Err(Error::InvalidArgument(format!("unknown mode label '{other}'"))),
        }
    }
}

/// First-order Hermite-Gauss scalar mode.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum HgIndex {
    Psi10,
    Psi01,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct BeamParams {
    /// Beam waist.
    pub w0: f64,
    /// Wavenumber.
    pub k: f64,
}

impl BeamParams {
    pub fn new(w0: f64, k: f64) -> Result<Self> {
        if !(w0 > 0.0 && w0.is_finite()) {
            return Err(Error::InvalidArgument(format!("beam waist must be positive, got {w0}")));
        }
        if !(k > 0.0 && k.is_finite()) {
            return Err(Error::InvalidArgument(format!("wavenumber must be positive, got {k}")));
        }
        Ok(BeamParams { w0, k })
    }

    /// `sqrt(8/pi) / w0^2`, the amplitude factor of the unit-norm scalar modes.
    pub fn mode_norm(&self) -> f64 {
        (8.0 / PI).sqrt() / (self.w0 * self.w0)
    }
}

impl Default for BeamParams {
    fn default() -> Self {
        BeamParams { w0: 1.0, k: 2.0 * PI }
    }
}

/// Uniform cell-centered sampling of the square `[-L w0, L w0]^2`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct GridSpec {
    /// Samples per axis.
    pub n: usize,
    /// Half extent in units of the beam waist.
    pub half_extent: f64,
}

impl GridSpec {
    pub fn new(n: usize, half_extent: f64) -> Result<Self> {
        if n < 16 || !n.is_multiple_of(2) {
            return Err(Error::InvalidArgument(format!(
                "grid size must be even and at least 16, got {n}"
            )));
        }
        if !(half_extent >= 3.0 && half_extent.is_finite()) {
            return Err(Error::InvalidArgument(format!(
                "grid half extent must be at least 3 waists, got {half_extent}"
            )));
        }
        Ok(GridSpec { n, half_extent })
    }

    /// Cell width in physical length units.
    pub fn step(&self, params: &BeamParams) -> f64 {
        2.0 * self.half_extent * params.w0 / self.n as f64
    }

    /// Center of cell `i` along either axis.
    pub fn coord(&self, i: usize, params: &BeamParams) -> f64 {
        -self.half_extent * params.w0 + (i as f64 + 0.5) * self.step(params)
    }

    pub fn cell_area(&self, params: &BeamParams) -> f64 {
        let h = self.step(params);
        h * h
    }
}

impl Default for GridSpec {
    fn default() -> Self {
        GridSpec { n: 256, half_extent: 5.0 }
    }
}

/// A vector mode as coefficients over the basis `(psi10 x, psi10 y, psi01 x, psi01 y)`.
#[derive(Clone, Copy, Debug, PartialEq, Default, Serialize, Deserialize)]
pub struct Coeff4(pub [C64; 4]);

impl Coeff4 {
    pub fn new(c: [C64; 4]) -> Self {
        Coeff4(c)
    }

    pub fn from_real(c: [f64; 4]) -> Self {
        Coeff4(c.map(C64::from))
    }

    pub fn zero() -> Self {
        Coeff4::default()
    }

    pub fn norm_sqr(&self) -> f64 {
        self.0.iter().map(|z| z.norm_sqr()).sum()
    }

    pub fn norm(&self) -> f64 {
        self.norm_sqr().sqrt()
    }

    pub fn is_finite(&self) -> bool {
        self.0.iter().all(|z| z.re.is_finite() && z.im.is_finite())
    }

    /// Errors with [`Error::NotNormalized`] unless `| |c|^2 - 1 | < tol`.
    pub fn require_unit(&self, tol: f64) -> Result<()> {
        let n2 = self.norm_sqr();
        if (n2 - 1.0).abs() < tol && n2.is_finite() {
            Ok(())
        } else {
            Err(Error::NotNormalized(n2))
        }
    }

    /// Hermitian product `sum conj(self_i) other_i`.
    pub fn inner(&self, other: &Coeff4) -> C64 {
        self.0.iter().zip(other.0.iter()).map(|(a, b)| a.conj() * b).sum()
    }

    pub fn scale(&self, s: C64) -> Coeff4 {
        Coeff4(self.0.map(|z| z * s))
    }

    pub fn conj(&self) -> Coeff4 {
        Coeff4(self.0.map(|z| z.conj()))
    }

    /// Largest componentwise modulus of `self - other`.
    pub fn max_abs_diff(&self, other: &Coeff4) -> f64 {
        self.0
            .iter()
            .zip(other.0.iter())
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }

    /// Field `(ex, ey)` at a single transverse point.
    pub fn eval_at(&self, params: &BeamParams, x: f64, y: f64) -> [C64; 2] {
        let p10 = eval_scalar_mode(HgIndex::Psi10, params, x, y);
        let p01 = eval_scalar_mode(HgIndex::Psi01, params, x, y);
        let c = &self.0;
        [c[0] * p10 + c[2] * p01, c[1] * p10 + c[3] * p01]
    }
}

impl Index<usize> for Coeff4 {
    type Output = C64;
    fn index(&self, i: usize) -> &C64 {
        &self.0[i]
    }
}

impl Add for Coeff4 {
    type Output = Coeff4;
    fn add(self, rhs: Coeff4) -> Coeff4 {
        Coeff4(std::array::from_fn(|i| self.0[i] + rhs.0[i]))
    }
}

impl Sub for Coeff4 {
    type Output = Coeff4;
    fn sub(self, rhs: Coeff4) -> Coeff4 {
        Coeff4(std::array::from_fn(|i| self.0[i] - rhs.0[i]))
    }
}

impl Mul<C64> for Coeff4 {
    type Output = Coeff4;
    fn mul(self, rhs: C64) -> Coeff4 {
        self.scale(rhs)
    }
}

/// Unit-norm first-order Hermite-Gauss mode at `z = 0`. Real valued.
pub fn eval_scalar_mode(index: HgIndex, params: &BeamParams, x: f64, y: f64) -> f64 {
    let w2 = params.w0 * params.w0;
    let g = (-(x * x + y * y) / w2).exp();
    let lin = match index {
        HgIndex::Psi10 => x,
        HgIndex::Psi01 => y,
    };
    params.mode_norm() * lin * g
}

/// Laguerre-Gauss mode `(psi10 +/- i psi01) / sqrt(2)` carrying one unit of orbital
/// angular momentum with the given sign.
pub fn eval_lg_mode(sign: Sign, params: &BeamParams, x: f64, y: f64) -> C64 {
    let p10 = eval_scalar_mode(HgIndex::Psi10, params, x, y);
    let p01 = eval_scalar_mode(HgIndex::Psi01, params, x, y);
    C64::new(p10, sign.value() * p01) * FRAC_1_SQRT_2
}

pub fn cpm_basis(label: CpmLabel) -> Coeff4 {
    let s = FRAC_1_SQRT_2;
    match label {
        CpmLabel::RadialPlus => Coeff4::from_real([s, 0.0, 0.0, s]),
        CpmLabel::AzimuthalPlus => Coeff4::from_real([0.0, s, -s, 0.0]),
        CpmLabel::RadialMinus => Coeff4::from_real([-s, 0.0, 0.0, s]),
        CpmLabel::AzimuthalMinus => Coeff4::from_real([0.0, s, s, 0.0]),
    }
}

/// `A u_R + B u_A` on the requested sphere. Requires `|A|^2 + |B|^2 = 1`.
pub fn make_uab(a: C64, b: C64, sphere: Sign) -> Result<Coeff4> {
    let n2 = a.norm_sqr() + b.norm_sqr();
    if !((n2 - 1.0).abs() < UNIT_NORM_TOL) {
        return Err(Error::NotNormalized(n2));
    }
    Ok(cpm_basis(CpmLabel::radial(sphere)) * a + cpm_basis(CpmLabel::azimuthal(sphere)) * b)
}

/// Transverse field sampled on a [`GridSpec`]; `ex`/`ey` are row major with the
/// row index running along `y`.
#[derive(Clone, Debug, PartialEq)]
pub struct FieldGrid {
    pub params: BeamParams,
    pub spec: GridSpec,
    pub ex: Vec<C64>,
    pub ey: Vec<C64>,
}

impl FieldGrid {
    pub fn n(&self) -> usize {
        self.spec.n
    }

    /// Physical coordinates of cell `(ix, iy)`.
    pub fn point(&self, ix: usize, iy: usize) -> (f64, f64) {
        (self.spec.coord(ix, &self.params), self.spec.coord(iy, &self.params))
    }

    pub fn at(&self, ix: usize, iy: usize) -> [C64; 2] {
        let k = iy * self.spec.n + ix;
        [self.ex[k], self.ey[k]]
    }

    pub fn intensity(&self) -> Vec<f64> {
        self.ex
            .iter()
            .zip(self.ey.iter())
            .map(|(a, b)| a.norm_sqr() + b.norm_sqr())
            .collect()
    }

    /// Midpoint-rule integral of `|ex|^2 + |ey|^2`.
    pub fn norm_sqr(&self) -> f64 {
        row_major_sum(self.spec.n, &self.intensity()) * self.spec.cell_area(&self.params)
    }

    pub fn is_finite(&self) -> bool {
        self.ex
            .iter()
            .chain(self.ey.iter())
            .all(|z| z.re.is_finite() && z.im.is_finite())
    }
}

/// Sums an `n x n` row-major array row by row, then the row sums in index order.
pub(crate) fn row_major_sum(n: usize, values: &[f64]) -> f64 {
    values.chunks(n).map(|row| row.iter().sum::<f64>()).sum()
}

pub(crate) fn row_major_sum_c(n: usize, values: &[C64]) -> C64 {
    values.chunks(n).map(|row| row.iter().sum::<C64>()).sum()
}

pub fn evaluate_field(c: &Coeff4, params: &BeamParams, spec: &GridSpec) -> FieldGrid {
    let n = spec.n;
    let mut ex = Vec::with_capacity(n * n);
    let mut ey = Vec::with_capacity(n * n);
    for iy in 0..n {
        let y = spec.coord(iy, params);
        for ix in 0..n {
            let x = spec.coord(ix, params);
            let [fx, fy] = c.eval_at(params, x, y);
            ex.push(fx);
            ey.push(fy);
        }
    }
    FieldGrid { params: *params, spec: *spec, ex, ey }
}

pub fn inner_product_coeff(a: &Coeff4, b: &Coeff4) -> C64 {
    a.inner(b)
}

/// Midpoint-rule scalar product `sum_i integral conj(u_i) v_i dx dy`.
pub fn inner_product_grid(u: &FieldGrid, v: &FieldGrid) -> Result<C64> {
    if u.params != v.params || u.spec != v.spec {
        return Err(Error::GridMismatch);
    }
    let n = u.spec.n;
    let prod: Vec<C64> = (0..n * n)
        .map(|k| u.ex[k].conj() * v.ex[k] + u.ey[k].conj() * v.ey[k])
        .collect();
    Ok(row_major_sum_c(n, &prod) * u.spec.cell_area(&u.params))
}

/// Real 2x2 rotation `[[cos, -sin], [sin, cos]]`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct RotMatrix2(pub [[f64; 2]; 2]);

impl RotMatrix2 {
    pub fn det(&self) -> f64 {
        self.0[0][0] * self.0[1][1] - self.0[0][1] * self.0[1][0]
    }

    pub fn apply(&self, v: [f64; 2]) -> [f64; 2] {
        [
            self.0[0][0] * v[0] + self.0[0][1] * v[1],
            self.0[1][0] * v[0] + self.0[1][1] * v[1],
        ]
    }

    pub fn apply_c(&self, v: [C64; 2]) -> [C64; 2] {
        [
            v[0] * self.0[0][0] + v[1] * self.0[0][1],
            v[0] * self.0[1][0] + v[1] * self.0[1][1],
        ]
    }

    pub fn to_mat2(&self) -> Mat2 {
        Mat2::from_real(self.0)
    }
}

impl Mul for RotMatrix2 {
    type Output = RotMatrix2;
    fn mul(self, rhs: RotMatrix2) -> RotMatrix2 {
        let (a, b) = (&self.0, &rhs.0);
        RotMatrix2(std::array::from_fn(|i| {
            std::array::from_fn(|j| a[i][0] * b[0][j] + a[i][1] * b[1][j])
        }))
    }
}

pub fn rotation_matrix(phi: f64) -> RotMatrix2 {
    let (s, c) = phi.sin_cos();
    RotMatrix2([[c, -s], [s, c]])
}

/// Global rotation operator on the coefficient space.
///
/// `G+(phi)` is the active rotation `u(x) -> R(phi) u(R(-phi) x)`; `G-(phi)` maps
/// `u(x) -> R(phi) u(R(phi) x)`. As matrices on basis `B` (columns are images of
/// basis vectors) these are `R(+/-phi) (x) R(phi)`; the scalar modes transform like
/// the components of the position vector.
pub fn g_operator(sign: Sign, phi: f64) -> Transform4 {
    let spatial = rotation_matrix(sign.value() * phi).to_mat2();
    let pol = rotation_matrix(phi).to_mat2();
    Transform4::new(Mat4::kron(&spatial, &pol), format!("G{sign}({phi})"))
}

/// Residuals of the rotation law `G^sign(phi) c = c` over the sampled angles.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct RotationLawReport {
    pub sign: Sign,
    pub max_residual: f64,
    /// For counter-rotating laws: `max || G+(phi) c - (I (x) R(2 phi)) c ||`, i.e. a global
    /// rotation acts on these modes as a local polarization rotation by twice the angle.
    pub double_angle_residual: Option<f64>,
}

pub fn check_rotation_law(c: &Coeff4, sign: Sign, phis: &[f64]) -> Result<RotationLawReport> {
    c.require_unit(UNIT_NORM_TOL)?;
    let mut max_residual: f64 = 0.0;
    let mut double: f64 = 0.0;
    for &phi in phis {
        let rotated = g_operator(sign, phi).apply(c);
        max_residual = max_residual.max((rotated - *c).norm());
        if sign == Sign::Minus {
            let global = g_operator(Sign::Plus, phi).apply(c);
            let local = Mat4::kron(&Mat2::IDENTITY, &rotation_matrix(2.0 * phi).to_mat2());
            let local = Coeff4(local.apply(&c.0));
            double = double.max((global - local).norm());
        }
    }
    Ok(RotationLawReport {
        sign,
        max_residual,
        double_angle_residual: (sign == Sign::Minus).then_some(double),
    })
}

/// Pointwise check of the rotation law on the grid: largest deviation between
/// `u(x)` and `R(phi) u(R(-/+phi) x)` evaluated directly from the closed form.
pub fn grid_rotation_residual(
    c: &Coeff4,
    sign: Sign,
    phi: f64,
    params: &BeamParams,
    spec: &GridSpec,
) -> f64 {
    let field = evaluate_field(c, params, spec);
    let back = rotation_matrix(-sign.value() * phi);
    let pol = rotation_matrix(phi);
    let n = spec.n;
    let mut worst: f64 = 0.0;
    for iy in 0..n {
        for ix in 0..n {
            let (x, y) = field.point(ix, iy);
            let [xr, yr] = back.apply([x, y]);
            let rotated = pol.apply_c(c.eval_at(params, xr, yr));
            let here = field.at(ix, iy);
            worst = worst.max((here[0] - rotated[0]).norm()).max((here[1] - rotated[1]).norm());
        }
    }
    worst
}
