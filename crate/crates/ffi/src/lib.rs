//! C ABI for `cypol`.
//!
//! Every function returns a [`CypolStatus`]. Results go through out-pointers,
//! which are left untouched on failure. After a non-OK status,
//! [`cypol_last_error`] returns a message for the calling thread.
//!
//! Fields, transforms and Fock states are opaque handles. Release them with
//! their matching `*_free` function. Passing NULL to a free function is a no-op.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use cypol::elements::{symmetry_check, SymmetryClass, Transform4, DEFAULT_PHI_SAMPLES, DEFAULT_SYMMETRY_TOL};
use cypol::hps::{allowed_transform, superselect, SpherePoint, TransformRule};
use cypol::modes::{cpm_basis, evaluate_field, make_uab};
use cypol::momentum::{integrate, momentum_density};
use cypol::pipeline::parse_elements;
use cypol::quantum::{
    coherent_state, entanglement_entropy, photon_wavefunction, single_photon, squeezed_state, FockSpaceSpec,
    FockState, Squeezer,
};
use cypol::schmidt::schmidt_of;
use cypol::{BeamParams, Coeff4, CpmLabel, Error, FieldGrid, GridSpec, Sign, C64};

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CypolStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidArgument = 2,
    NotNormalized = 3,
    ZeroField = 4,
    ForbiddenTransform = 5,
    TruncationRisk = 6,
    NotPure = 7,
    BufferTooSmall = 8,
    Internal = 9,
}

impl From<&Error> for CypolStatus {
    fn from(e: &Error) -> Self {
        match e {
            Error::NotNormalized(_) => CypolStatus::NotNormalized,
            Error::ZeroField => CypolStatus::ZeroField,
            Error::ForbiddenTransform { .. } => CypolStatus::ForbiddenTransform,
            Error::TruncationRisk(_) => CypolStatus::TruncationRisk,
            Error::NotPure(_) => CypolStatus::NotPure,
            Error::InvalidArgument(_) | Error::Config(_) | Error::KindMismatch { .. } | Error::GridMismatch => {
                CypolStatus::InvalidArgument
            }
            Error::Io(_) | Error::Json(_) => CypolStatus::Internal,
        }
    }
}

#[repr(C)]
#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct CypolComplex {
    pub re: f64,
    pub im: f64,
}

impl From<CypolComplex> for C64 {
    fn from(z: CypolComplex) -> C64 {
        C64::new(z.re, z.im)
    }
}

impl From<C64> for CypolComplex {
    fn from(z: C64) -> CypolComplex {
        CypolComplex { re: z.re, im: z.im }
    }
}

/// Coefficients on `(psi10 x, psi10 y, psi01 x, psi01 y)`.
#[repr(C)]
#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct CypolCoeff4 {
    pub c: [CypolComplex; 4],
}

impl From<CypolCoeff4> for Coeff4 {
    fn from(c: CypolCoeff4) -> Coeff4 {
        Coeff4(c.c.map(C64::from))
    }
}

impl From<Coeff4> for CypolCoeff4 {
    fn from(c: Coeff4) -> CypolCoeff4 {
        CypolCoeff4 { c: c.0.map(CypolComplex::from) }
    }
}

/// `sphere` is `+1` or `-1`.
#[repr(C)]
#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct CypolSpherePoint {
    pub theta: f64,
    pub phi: f64,
    pub sphere: i32,
}

#[repr(C)]
#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct CypolSchmidt {
    pub lambda: [f64; 2],
    pub k: f64,
}

#[repr(C)]
#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct CypolMomentum {
    pub p: [f64; 3],
    pub p_sp: [f64; 3],
    pub l: [f64; 3],
    pub s: [f64; 3],
    pub j: [f64; 3],
}

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CypolSymmetryClass {
    PreservesPlus = 0,
    PreservesMinus = 1,
    PreservesBoth = 2,
    SwapsSpheres = 3,
    Breaks = 4,
}

impl From<SymmetryClass> for CypolSymmetryClass {
    fn from(c: SymmetryClass) -> Self {
        match c {
            SymmetryClass::PreservesPlus => CypolSymmetryClass::PreservesPlus,
            SymmetryClass::PreservesMinus => CypolSymmetryClass::PreservesMinus,
            SymmetryClass::PreservesBoth => CypolSymmetryClass::PreservesBoth,
            SymmetryClass::SwapsSpheres => CypolSymmetryClass::SwapsSpheres,
            SymmetryClass::Breaks => CypolSymmetryClass::Breaks,
        }
    }
}

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct CypolSymmetry {
    pub symmetry_class: CypolSymmetryClass,
    pub kernel_residual_plus: f64,
    pub kernel_residual_minus: f64,
    pub unitary: bool,
}

/// A mode sampled on a grid.
pub struct CypolField {
    coeff: Coeff4,
    grid: FieldGrid,
}

/// A 4x4 operator on the mode coefficients.
pub struct CypolTransform {
    inner: Transform4,
}

/// A state in a truncated Fock space.
pub struct CypolFockState {
    inner: FockState,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: String) {
    let c = CString::new(msg.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(c));
}

struct Failure(CypolStatus, String);

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure(CypolStatus::from(&e), e.to_string())
    }
}

type FfiResult<T> = std::result::Result<T, Failure>;

fn invalid(msg: impl Into<String>) -> Failure {
    Failure(CypolStatus::InvalidArgument, msg.into())
}

fn guard(f: impl FnOnce() -> FfiResult<()>) -> CypolStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => {
            LAST_ERROR.with(|e| *e.borrow_mut() = None);
            CypolStatus::Ok
        }
        Ok(Err(Failure(status, msg))) => {
            set_error(msg);
            status
        }
        Err(_) => {
            set_error("internal panic".into());
            CypolStatus::Internal
        }
    }
}

unsafe fn out<'a, T>(p: *mut T, name: &str) -> FfiResult<&'a mut T> {
    p.as_mut().ok_or_else(|| Failure(CypolStatus::NullPointer, format!("{name} is NULL")))
}

unsafe fn input<'a, T>(p: *const T, name: &str) -> FfiResult<&'a T> {
    p.as_ref().ok_or_else(|| Failure(CypolStatus::NullPointer, format!("{name} is NULL")))
}

fn sign_from(sphere: i32) -> FfiResult<Sign> {
    match sphere {
        1 => Ok(Sign::Plus),
        -1 => Ok(Sign::Minus),
        other => Err(invalid(format!("sphere must be +1 or -1, got {other}"))),
    }
}

fn sign_to(s: Sign) -> i32 {
    match s {
        Sign::Plus => 1,
        Sign::Minus => -1,
    }
}

fn boxed<T>(slot: &mut *mut T, value: T) {
    *slot = Box::into_raw(Box::new(value));
}

/// Message for the last failed call on this thread, or NULL. Valid until the next call.
#[no_mangle]
pub extern "C" fn cypol_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |c| c.as_ptr()))
}

/// Basis mode by index: 0 `R+`, 1 `A+`, 2 `R-`, 3 `A-`.
///
/// # Safety
/// `out_coeff` must be NULL or valid for writes.
#[no_mangle]
pub unsafe extern "C" fn cypol_cpm_basis(label: u32, out_coeff: *mut CypolCoeff4) -> CypolStatus {
    guard(|| {
        let out_coeff = out(out_coeff, "out_coeff")?;
        let l = CpmLabel::ALL.get(label as usize).ok_or_else(|| invalid(format!("label index {label} out of range")))?;
        *out_coeff = cpm_basis(*l).into();
        Ok(())
    })
}

/// `a u_R + b u_A` on the given sphere; requires `|a|^2 + |b|^2 = 1`.
///
/// # Safety
/// `out_coeff` must be NULL or valid for writes.
#[no_mangle]
pub unsafe extern "C" fn cypol_make_uab(
    a: CypolComplex,
    b: CypolComplex,
    sphere: i32,
    out_coeff: *mut CypolCoeff4,
) -> CypolStatus {
    guard(|| {
        let out_coeff = out(out_coeff, "out_coeff")?;
        *out_coeff = make_uab(a.into(), b.into(), sign_from(sphere)?)?.into();
        Ok(())
    })
}

/// # Safety
/// Pointers must be NULL or valid.
#[no_mangle]
pub unsafe extern "C" fn cypol_schmidt(coeff: *const CypolCoeff4, out_result: *mut CypolSchmidt) -> CypolStatus {
    guard(|| {
        let c: Coeff4 = (*input(coeff, "coeff")?).into();
        let out_result = out(out_result, "out_result")?;
        let r = schmidt_of(&c)?;
        *out_result = CypolSchmidt { lambda: r.lambda, k: r.k };
        Ok(())
    })
}

/// Point of the component of `coeff` on `sphere`, and that component's weight.
///
/// # Safety
/// Pointers must be NULL or valid.
#[no_mangle]
pub unsafe extern "C" fn cypol_hps_point(
    coeff: *const CypolCoeff4,
    sphere: i32,
    out_point: *mut CypolSpherePoint,
    out_weight: *mut f64,
) -> CypolStatus {
    guard(|| {
        let c: Coeff4 = (*input(coeff, "coeff")?).into();
        let s = sign_from(sphere)?;
        let out_point = out(out_point, "out_point")?;
        let out_weight = out(out_weight, "out_weight")?;
        let comp = *superselect(&c).component(s);
        let p = comp.point(s)?;
        *out_point = CypolSpherePoint { theta: p.theta, phi: p.phi, sphere: sign_to(p.sphere) };
        *out_weight = comp.weight;
        Ok(())
    })
}

/// Applies rule `'a'`, `'b'` or `'c'`.
///
/// # Safety
/// Pointers must be NULL or valid.
#[no_mangle]
pub unsafe extern "C" fn cypol_hps_transform(
    point: *const CypolSpherePoint,
    rule: c_char,
    out_point: *mut CypolSpherePoint,
) -> CypolStatus {
    guard(|| {
        let p = input(point, "point")?;
        let out_point = out(out_point, "out_point")?;
        let rule: TransformRule = ((rule as u8) as char).to_string().parse()?;
        let q = allowed_transform(&SpherePoint::new(p.theta, p.phi, sign_from(p.sphere)?)?, rule)?;
        *out_point = CypolSpherePoint { theta: q.theta, phi: q.phi, sphere: sign_to(q.sphere) };
        Ok(())
    })
}

/// Samples `coeff` on an `n x n` grid covering `[-half_extent w0, half_extent w0]^2`.
///
/// # Safety
/// Pointers must be NULL or valid.
#[no_mangle]
pub unsafe extern "C" fn cypol_field_new(
    coeff: *const CypolCoeff4,
    w0: f64,
    k: f64,
    n: usize,
    half_extent: f64,
    out_field: *mut *mut CypolField,
) -> CypolStatus {
    guard(|| {
        let c: Coeff4 = (*input(coeff, "coeff")?).into();
        let out_field = out(out_field, "out_field")?;
        if !c.is_finite() {
            return Err(invalid("coefficients must be finite"));
        }
        let params = BeamParams::new(w0, k)?;
        let spec = GridSpec::new(n, half_extent)?;
        boxed(out_field, CypolField { coeff: c, grid: evaluate_field(&c, &params, &spec) });
        Ok(())
    })
}

/// Samples per axis.
///
/// # Safety
/// Pointers must be NULL or valid.
#[no_mangle]
pub unsafe extern "C" fn cypol_field_size(field: *const CypolField, out_n: *mut usize) -> CypolStatus {
    guard(|| {
        let f = input(field, "field")?;
        *out(out_n, "out_n")? = f.grid.n();
        Ok(())
    })
}

/// Copies `n * n` intensities, row major with rows along `y`, into `buf`.
///
/// # Safety
/// `buf` must be NULL or valid for `len` writes.
#[no_mangle]
pub unsafe extern "C" fn cypol_field_intensity(field: *const CypolField, buf: *mut f64, len: usize) -> CypolStatus {
    guard(|| {
        let f = input(field, "field")?;
        if buf.is_null() {
            return Err(Failure(CypolStatus::NullPointer, "buf is NULL".into()));
        }
        let values = f.grid.intensity();
        if len < values.len() {
            return Err(Failure(CypolStatus::BufferTooSmall, format!("need {} values, got {len}", values.len())));
        }
        std::slice::from_raw_parts_mut(buf, values.len()).copy_from_slice(&values);
        Ok(())
    })
}

/// Integrated momentum, spin and angular momentum per unit length on the field's grid.
///
/// # Safety
/// Pointers must be NULL or valid.
#[no_mangle]
pub unsafe extern "C" fn cypol_field_momentum(field: *const CypolField, out_result: *mut CypolMomentum) -> CypolStatus {
    guard(|| {
        let f = input(field, "field")?;
        let out_result = out(out_result, "out_result")?;
        let r = integrate(&momentum_density(&f.coeff, &f.grid.params, &f.grid.spec)?);
        *out_result = CypolMomentum { p: r.p, p_sp: r.p_sp, l: r.l, s: r.s, j: r.j };
        Ok(())
    })
}

/// # Safety
/// `field` must be NULL or a handle from [`cypol_field_new`] not yet freed.
#[no_mangle]
pub unsafe extern "C" fn cypol_field_free(field: *mut CypolField) {
    if !field.is_null() {
        drop(Box::from_raw(field));
    }
}

/// Composes a `;`-separated element list such as `"hwp:0; qwp:0.3"`, applied left to right.
///
/// # Safety
/// `elements` must be NULL or a NUL-terminated string; `out_transform` NULL or valid.
#[no_mangle]
pub unsafe extern "C" fn cypol_transform_parse(
    elements: *const c_char,
    out_transform: *mut *mut CypolTransform,
) -> CypolStatus {
    guard(|| {
        if elements.is_null() {
            return Err(Failure(CypolStatus::NullPointer, "elements is NULL".into()));
        }
        let text = CStr::from_ptr(elements).to_str().map_err(|_| invalid("elements is not UTF-8"))?;
        let out_transform = out(out_transform, "out_transform")?;
        let t = parse_elements(text)?
            .iter()
            .fold(Transform4::identity(), |acc, e| acc.then(&e.transform()));
        boxed(out_transform, CypolTransform { inner: t });
        Ok(())
    })
}

/// # Safety
/// Pointers must be NULL or valid.
#[no_mangle]
pub unsafe extern "C" fn cypol_transform_apply(
    transform: *const CypolTransform,
    coeff: *const CypolCoeff4,
    out_coeff: *mut CypolCoeff4,
) -> CypolStatus {
    guard(|| {
        let t = input(transform, "transform")?;
        let c: Coeff4 = (*input(coeff, "coeff")?).into();
        *out(out_coeff, "out_coeff")? = t.inner.apply(&c).into();
        Ok(())
    })
}

/// Classifies the transform against both rotation laws.
///
/// # Safety
/// Pointers must be NULL or valid.
#[no_mangle]
pub unsafe extern "C" fn cypol_transform_symmetry(
    transform: *const CypolTransform,
    out_result: *mut CypolSymmetry,
) -> CypolStatus {
    guard(|| {
        let t = input(transform, "transform")?;
        let out_result = out(out_result, "out_result")?;
        let r = symmetry_check(&t.inner, &DEFAULT_PHI_SAMPLES, DEFAULT_SYMMETRY_TOL)?;
        *out_result = CypolSymmetry {
            symmetry_class: r.class.into(),
            kernel_residual_plus: r.kernel_residual_plus,
            kernel_residual_minus: r.kernel_residual_minus,
            unitary: r.unitary,
        };
        Ok(())
    })
}

/// # Safety
/// `transform` must be NULL or a handle from [`cypol_transform_parse`] not yet freed.
#[no_mangle]
pub unsafe extern "C" fn cypol_transform_free(transform: *mut CypolTransform) {
    if !transform.is_null() {
        drop(Box::from_raw(transform));
    }
}

/// Coherent state of amplitude `alpha` in the mode `a u_R + b u_A` (co-rotating sphere),
/// on the four-mode space truncated at `n_max`.
///
/// # Safety
/// `out_state` must be NULL or valid.
#[no_mangle]
pub unsafe extern "C" fn cypol_fock_coherent(
    alpha: CypolComplex,
    a: CypolComplex,
    b: CypolComplex,
    n_max: usize,
    out_state: *mut *mut CypolFockState,
) -> CypolStatus {
    guard(|| {
        let out_state = out(out_state, "out_state")?;
        let space = FockSpaceSpec::four_mode(n_max)?;
        let s = coherent_state(&space, alpha.into(), a.into(), b.into())?;
        boxed(out_state, CypolFockState { inner: s });
        Ok(())
    })
}

/// Single photon in the mode `a u_R + b u_A`.
///
/// # Safety
/// `out_state` must be NULL or valid.
#[no_mangle]
pub unsafe extern "C" fn cypol_fock_single_photon(
    a: CypolComplex,
    b: CypolComplex,
    n_max: usize,
    out_state: *mut *mut CypolFockState,
) -> CypolStatus {
    guard(|| {
        let out_state = out(out_state, "out_state")?;
        let space = FockSpaceSpec::four_mode(n_max)?;
        let s = single_photon(&space, a.into(), b.into())?;
        boxed(out_state, CypolFockState { inner: s });
        Ok(())
    })
}

/// Two-mode squeezed vacuum of modes 3 and 4 on the two-mode space.
///
/// # Safety
/// `out_state` must be NULL or valid.
#[no_mangle]
pub unsafe extern "C" fn cypol_fock_two_mode_squeezed(
    zeta: CypolComplex,
    n_max: usize,
    out_state: *mut *mut CypolFockState,
) -> CypolStatus {
    guard(|| {
        let out_state = out(out_state, "out_state")?;
        let space = FockSpaceSpec::two_mode(n_max)?;
        let s = squeezed_state(&space, &[Squeezer::Two { modes: (3, 4), zeta: zeta.into() }])?;
        boxed(out_state, CypolFockState { inner: s });
        Ok(())
    })
}

/// Number of modes in the state's space (4 or 2).
///
/// # Safety
/// Pointers must be NULL or valid.
#[no_mangle]
pub unsafe extern "C" fn cypol_fock_mode_count(state: *const CypolFockState, out_count: *mut usize) -> CypolStatus {
    guard(|| {
        let s = input(state, "state")?;
        *out(out_count, "out_count")? = s.inner.space.modes.len();
        Ok(())
    })
}

/// # Safety
/// Pointers must be NULL or valid.
#[no_mangle]
pub unsafe extern "C" fn cypol_fock_norm(state: *const CypolFockState, out_norm: *mut f64) -> CypolStatus {
    guard(|| {
        let s = input(state, "state")?;
        *out(out_norm, "out_norm")? = s.inner.norm();
        Ok(())
    })
}

/// # Safety
/// Pointers must be NULL or valid.
#[no_mangle]
pub unsafe extern "C" fn cypol_fock_mean_photons(state: *const CypolFockState, out_mean: *mut f64) -> CypolStatus {
    guard(|| {
        let s = input(state, "state")?;
        *out(out_mean, "out_mean")? = s.inner.mean_photon_number();
        Ok(())
    })
}

/// Amplitude of the number state with the given occupations, one per mode.
///
/// # Safety
/// `occupations` must be NULL or valid for `len` reads; other pointers NULL or valid.
#[no_mangle]
pub unsafe extern "C" fn cypol_fock_amplitude(
    state: *const CypolFockState,
    occupations: *const usize,
    len: usize,
    out_amp: *mut CypolComplex,
) -> CypolStatus {
    guard(|| {
        let s = input(state, "state")?;
        if occupations.is_null() {
            return Err(Failure(CypolStatus::NullPointer, "occupations is NULL".into()));
        }
        let out_amp = out(out_amp, "out_amp")?;
        let occ = std::slice::from_raw_parts(occupations, len);
        let space = &s.inner.space;
        if occ.len() != space.modes.len() {
            return Err(invalid(format!("expected {} occupations, got {}", space.modes.len(), occ.len())));
        }
        if let Some(&n) = occ.iter().find(|&&n| n > space.n_max) {
            return Err(invalid(format!("occupation {n} exceeds the cutoff {}", space.n_max)));
        }
        *out_amp = s.inner.amplitude(occ).into();
        Ok(())
    })
}

/// Entanglement entropy (nats) between the listed mode labels and the rest.
///
/// # Safety
/// `modes` must be NULL or valid for `len` reads; other pointers NULL or valid.
#[no_mangle]
pub unsafe extern "C" fn cypol_fock_entropy(
    state: *const CypolFockState,
    modes: *const u8,
    len: usize,
    out_entropy: *mut f64,
) -> CypolStatus {
    guard(|| {
        let s = input(state, "state")?;
        if modes.is_null() {
            return Err(Failure(CypolStatus::NullPointer, "modes is NULL".into()));
        }
        let out_entropy = out(out_entropy, "out_entropy")?;
        *out_entropy = entanglement_entropy(&s.inner, std::slice::from_raw_parts(modes, len))?;
        Ok(())
    })
}

/// Single-photon wavefunction `<0|E+|psi>` as mode coefficients (four-mode states only).
///
/// # Safety
/// Pointers must be NULL or valid.
#[no_mangle]
pub unsafe extern "C" fn cypol_fock_photon_wavefunction(
    state: *const CypolFockState,
    out_coeff: *mut CypolCoeff4,
) -> CypolStatus {
    guard(|| {
        let s = input(state, "state")?;
        let out_coeff = out(out_coeff, "out_coeff")?;
        *out_coeff = photon_wavefunction(&s.inner)?.into();
        Ok(())
    })
}

/// # Safety
/// `state` must be NULL or a handle from a `cypol_fock_*` constructor not yet freed.
#[no_mangle]
pub unsafe extern "C" fn cypol_fock_free(state: *mut CypolFockState) {
    if !state.is_null() {
        drop(Box::from_raw(state));
    }
}
