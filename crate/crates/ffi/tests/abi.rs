use std::ffi::{CStr, CString};
use std::path::{Path, PathBuf};
use std::process::Command;
use std::ptr;

use cypol_ffi::*;

const S: f64 = std::f64::consts::FRAC_1_SQRT_2;

fn c(re: f64, im: f64) -> CypolComplex {
    CypolComplex { re, im }
}

fn last_error() -> String {
    let p = cypol_last_error();
    assert!(!p.is_null());
    unsafe { CStr::from_ptr(p) }.to_string_lossy().into_owned()
}

#[test]
fn basis_and_schmidt() {
    let mut coeff = CypolCoeff4::default();
    assert_eq!(unsafe { cypol_cpm_basis(1, &mut coeff) }, CypolStatus::Ok);
    assert_eq!(coeff.c[1], c(S, 0.0));
    assert!(cypol_last_error().is_null());
    let mut r = CypolSchmidt::default();
    assert_eq!(unsafe { cypol_schmidt(&coeff, &mut r) }, CypolStatus::Ok);
    assert!((r.k - 2.0).abs() < 1e-12);
    assert!((r.lambda[0] - 0.5).abs() < 1e-12);

    assert_eq!(unsafe { cypol_cpm_basis(4, &mut coeff) }, CypolStatus::InvalidArgument);
    assert!(last_error().contains("out of range"));
    assert_eq!(unsafe { cypol_schmidt(ptr::null(), &mut r) }, CypolStatus::NullPointer);
    assert_eq!(unsafe { cypol_cpm_basis(0, ptr::null_mut()) }, CypolStatus::NullPointer);
}

#[test]
fn separable_mode_has_unit_schmidt_number() {
    let mut coeff = CypolCoeff4::default();
    assert_eq!(unsafe { cypol_make_uab(c(S, 0.0), c(0.0, S), 1, &mut coeff) }, CypolStatus::Ok);
    let mut r = CypolSchmidt::default();
    assert_eq!(unsafe { cypol_schmidt(&coeff, &mut r) }, CypolStatus::Ok);
    assert!((r.k - 1.0).abs() < 1e-12);
    assert_eq!(unsafe { cypol_make_uab(c(1.0, 0.0), c(1.0, 0.0), 1, &mut coeff) }, CypolStatus::NotNormalized);
    assert_eq!(unsafe { cypol_make_uab(c(1.0, 0.0), c(0.0, 0.0), 0, &mut coeff) }, CypolStatus::InvalidArgument);
}

#[test]
fn sphere_points_and_rules() {
    let mut coeff = CypolCoeff4::default();
    unsafe { cypol_make_uab(c(0.6, 0.0), c(0.8, 0.0), -1, &mut coeff) };
    let mut p = CypolSpherePoint::default();
    let mut w = 0.0;
    assert_eq!(unsafe { cypol_hps_point(&coeff, -1, &mut p, &mut w) }, CypolStatus::Ok);
    assert!((w - 1.0).abs() < 1e-12);
    assert_eq!(p.sphere, -1);
    assert!(p.phi.abs() < 1e-12);
    assert_eq!(unsafe { cypol_hps_point(&coeff, 1, &mut p, &mut w) }, CypolStatus::ZeroField);

    unsafe { cypol_hps_point(&coeff, -1, &mut p, &mut w) };
    let mut q = CypolSpherePoint::default();
    assert_eq!(unsafe { cypol_hps_transform(&p, b'a' as _, &mut q) }, CypolStatus::Ok);
    assert!((q.theta + p.theta - std::f64::consts::PI).abs() < 1e-12);
    let off = CypolSpherePoint { theta: 1.0, phi: 0.4, sphere: 1 };
    assert_eq!(unsafe { cypol_hps_transform(&off, b'b' as _, &mut q) }, CypolStatus::ForbiddenTransform);
    assert_eq!(unsafe { cypol_hps_transform(&off, b'c' as _, &mut q) }, CypolStatus::Ok);
    assert_eq!(unsafe { cypol_hps_transform(&off, b'z' as _, &mut q) }, CypolStatus::InvalidArgument);
}

#[test]
fn field_handle() {
    let mut coeff = CypolCoeff4::default();
    unsafe { cypol_cpm_basis(0, &mut coeff) };
    let mut field: *mut CypolField = ptr::null_mut();
    let tau = 2.0 * std::f64::consts::PI;
    assert_eq!(unsafe { cypol_field_new(&coeff, 1.0, tau, 64, 6.0, &mut field) }, CypolStatus::Ok);
    let mut n = 0;
    assert_eq!(unsafe { cypol_field_size(field, &mut n) }, CypolStatus::Ok);
    assert_eq!(n, 64);
    let mut buf = vec![0.0; n * n];
    assert_eq!(unsafe { cypol_field_intensity(field, buf.as_mut_ptr(), 10) }, CypolStatus::BufferTooSmall);
    assert_eq!(unsafe { cypol_field_intensity(field, buf.as_mut_ptr(), buf.len()) }, CypolStatus::Ok);
    let cell = (12.0 / 64.0) * (12.0 / 64.0);
    assert!((buf.iter().sum::<f64>() * cell - 1.0).abs() < 1e-6);
    let mut m = CypolMomentum::default();
    assert_eq!(unsafe { cypol_field_momentum(field, &mut m) }, CypolStatus::Ok);
    assert!(m.j[2].abs() < 1e-8);
    unsafe { cypol_field_free(field) };
    unsafe { cypol_field_free(ptr::null_mut()) };

    assert_eq!(unsafe { cypol_field_new(&coeff, 1.0, tau, 15, 6.0, &mut field) }, CypolStatus::InvalidArgument);
    assert_eq!(unsafe { cypol_field_new(&coeff, -1.0, tau, 64, 6.0, &mut field) }, CypolStatus::InvalidArgument);
}

#[test]
fn transform_handle() {
    let mut t: *mut CypolTransform = ptr::null_mut();
    let hwp = CString::new("hwp:0").unwrap();
    assert_eq!(unsafe { cypol_transform_parse(hwp.as_ptr(), &mut t) }, CypolStatus::Ok);
    let mut sym = CypolSymmetry {
        symmetry_class: CypolSymmetryClass::Breaks,
        kernel_residual_plus: f64::NAN,
        kernel_residual_minus: f64::NAN,
        unitary: false,
    };
    assert_eq!(unsafe { cypol_transform_symmetry(t, &mut sym) }, CypolStatus::Ok);
    assert_eq!(sym.symmetry_class, CypolSymmetryClass::SwapsSpheres);
    assert!(sym.unitary);

    let mut rp = CypolCoeff4::default();
    let mut rm = CypolCoeff4::default();
    let mut image = CypolCoeff4::default();
    unsafe { cypol_cpm_basis(0, &mut rp) };
    unsafe { cypol_cpm_basis(2, &mut rm) };
    assert_eq!(unsafe { cypol_transform_apply(t, &rp, &mut image) }, CypolStatus::Ok);
    for i in 0..4 {
        assert!((image.c[i].re + rm.c[i].re).abs() < 1e-12);
    }
    unsafe { cypol_transform_free(t) };

    let circ = CString::new("circpol:L; spatial-rot:0.3").unwrap();
    unsafe { cypol_transform_parse(circ.as_ptr(), &mut t) };
    unsafe { cypol_transform_symmetry(t, &mut sym) };
    assert_eq!(sym.symmetry_class, CypolSymmetryClass::PreservesBoth);
    unsafe { cypol_transform_free(t) };

    let bad = CString::new("laser:1").unwrap();
    t = ptr::null_mut();
    assert_eq!(unsafe { cypol_transform_parse(bad.as_ptr(), &mut t) }, CypolStatus::InvalidArgument);
    assert!(t.is_null());
    assert!(last_error().contains("laser"));
    assert_eq!(unsafe { cypol_transform_parse(ptr::null(), &mut t) }, CypolStatus::NullPointer);
}

#[test]
fn fock_handles() {
    let mut st: *mut CypolFockState = ptr::null_mut();
    assert_eq!(unsafe { cypol_fock_single_photon(c(0.6, 0.0), c(0.0, 0.8), 3, &mut st) }, CypolStatus::Ok);
    let (mut norm, mut mean, mut count) = (0.0, 0.0, 0);
    unsafe { cypol_fock_norm(st, &mut norm) };
    unsafe { cypol_fock_mean_photons(st, &mut mean) };
    unsafe { cypol_fock_mode_count(st, &mut count) };
    assert!((norm - 1.0).abs() < 1e-12 && (mean - 1.0).abs() < 1e-12);
    assert_eq!(count, 4);
    let mut psi = CypolCoeff4::default();
    assert_eq!(unsafe { cypol_fock_photon_wavefunction(st, &mut psi) }, CypolStatus::Ok);
    // Complex weights come back conjugated.
    let mut expect = CypolCoeff4::default();
    unsafe { cypol_make_uab(c(0.6, 0.0), c(0.0, -0.8), 1, &mut expect) };
    for i in 0..4 {
        let dr = psi.c[i].re - 0.5 * expect.c[i].re;
        let di = psi.c[i].im - 0.5 * expect.c[i].im;
        assert!(dr.hypot(di) < 1e-12, "component {i}");
    }
    let mut amp = c(0.0, 0.0);
    let occ = [0usize, 0, 0, 9];
    assert_eq!(unsafe { cypol_fock_amplitude(st, occ.as_ptr(), 4, &mut amp) }, CypolStatus::InvalidArgument);
    assert_eq!(unsafe { cypol_fock_amplitude(st, occ.as_ptr(), 3, &mut amp) }, CypolStatus::InvalidArgument);
    unsafe { cypol_fock_free(st) };

    let zeta = 0.5f64;
    assert_eq!(unsafe { cypol_fock_two_mode_squeezed(c(zeta, 0.0), 20, &mut st) }, CypolStatus::Ok);
    let occ = [1usize, 1];
    assert_eq!(unsafe { cypol_fock_amplitude(st, occ.as_ptr(), 2, &mut amp) }, CypolStatus::Ok);
    assert!((amp.re + zeta.tanh() / zeta.cosh()).abs() < 1e-8 && amp.im.abs() < 1e-8);
    let mut entropy = 0.0;
    let part = [3u8];
    assert_eq!(unsafe { cypol_fock_entropy(st, part.as_ptr(), 1, &mut entropy) }, CypolStatus::Ok);
    let (ch, sh) = (zeta.cosh().powi(2), zeta.sinh().powi(2));
    assert!((entropy - (ch * ch.ln() - sh * sh.ln())).abs() < 1e-6);
    assert_eq!(unsafe { cypol_fock_photon_wavefunction(st, &mut psi) }, CypolStatus::InvalidArgument);
    unsafe { cypol_fock_free(st) };

    assert_eq!(unsafe { cypol_fock_two_mode_squeezed(c(5.0, 0.0), 20, &mut st) }, CypolStatus::TruncationRisk);
    assert_eq!(unsafe { cypol_fock_coherent(c(0.5, 0.0), c(1.0, 0.0), c(0.0, 0.0), 1, &mut st) }, CypolStatus::InvalidArgument);
}

#[test]
fn errors_are_per_thread() {
    let mut coeff = CypolCoeff4::default();
    unsafe { cypol_cpm_basis(9, &mut coeff) };
    assert!(!cypol_last_error().is_null());
    std::thread::spawn(|| assert!(cypol_last_error().is_null())).join().unwrap();
}

fn header() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("include/cypol.h")
}

fn has_cc() -> bool {
    Command::new("cc").arg("--version").output().is_ok_and(|o| o.status.success())
}

#[test]
fn header_declares_the_api() {
    let text = std::fs::read_to_string(header()).unwrap();
    for name in [
        "cypol_last_error",
        "cypol_schmidt",
        "cypol_hps_point",
        "cypol_field_new",
        "cypol_field_free",
        "cypol_transform_symmetry",
        "cypol_fock_entropy",
        "typedef struct CypolField CypolField;",
        "CYPOL_STATUS_NULL_POINTER = 1",
    ] {
        assert!(text.contains(name), "{name} missing from header");
    }
}

#[test]
fn header_compiles_as_c_and_cpp() {
    if !has_cc() {
        eprintln!("cc not found, skipping header compile check");
        return;
    }
    for lang in ["c", "c++"] {
        let out = Command::new("cc")
            .args(["-fsyntax-only", "-Wall", "-Werror", "-x", lang])
            .arg(header())
            .output()
            .unwrap();
        assert!(out.status.success(), "{lang}: {}", String::from_utf8_lossy(&out.stderr));
    }
}

const C_PROGRAM: &str = r#"
#include <math.h>
#include <stdio.h>
#include "cypol.h"

int main(void) {
    CypolCoeff4 a;
    CypolSchmidt r;
    if (cypol_cpm_basis(1, &a) != CYPOL_STATUS_OK) return 1;
    if (cypol_schmidt(&a, &r) != CYPOL_STATUS_OK) return 2;
    if (fabs(r.k - 2.0) > 1e-12) return 3;
    CypolTransform *t = NULL;
    if (cypol_transform_parse("hwp:0", &t) != CYPOL_STATUS_OK) return 4;
    CypolSymmetry s;
    if (cypol_transform_symmetry(t, &s) != CYPOL_STATUS_OK) return 5;
    cypol_transform_free(t);
    if (s.symmetry_class != CYPOL_SYMMETRY_CLASS_SWAPS_SPHERES) return 6;
    if (cypol_cpm_basis(7, &a) != CYPOL_STATUS_INVALID_ARGUMENT) return 7;
    printf("%s\n", cypol_last_error());
    return 0;
}
"#;

#[test]
fn c_program_links_against_the_static_library() {
    // Integration tests live in target/<profile>/deps; the library sits one level up.
    let exe = std::env::current_exe().unwrap();
    let lib_dir = exe.parent().and_then(Path::parent).unwrap();
    let lib = lib_dir.join("libcypol_ffi.a");
    if !has_cc() || !lib.exists() {
        eprintln!("cc or {} not available, skipping link check", lib.display());
        return;
    }
    let dir = tempfile::tempdir().unwrap();
    let src = dir.path().join("main.c");
    let bin = dir.path().join("main");
    std::fs::write(&src, C_PROGRAM).unwrap();
    let build = Command::new("cc")
        .arg(&src)
        .arg("-I")
        .arg(header().parent().unwrap())
        .arg(&lib)
        .args(["-lm", "-lpthread", "-ldl", "-o"])
        .arg(&bin)
        .output()
        .unwrap();
    assert!(build.status.success(), "{}", String::from_utf8_lossy(&build.stderr));
    let run = Command::new(&bin).output().unwrap();
    assert_eq!(run.status.code(), Some(0));
    assert!(String::from_utf8_lossy(&run.stdout).contains("out of range"));
}
