use std::ffi::CStr;
use std::ptr;

use ising_exact_ffi::*;

#[test]
fn scalar_functions() {
    let kc = ising_critical_coupling();
    assert!((kc - 0.4406867935).abs() < 1e-10);
    let mut d = 0.0;
    assert_eq!(unsafe { ising_dual_coupling(kc, &mut d) }, IsingStatus::Ok);
    assert!((d - kc).abs() < 1e-12);
    let (mut k, mut e) = (0.0, 0.0);
    assert_eq!(
        unsafe { ising_complete_elliptic(0.0, &mut k, &mut e) },
        IsingStatus::Ok
    );
    assert_eq!(k, std::f64::consts::FRAC_PI_2);
    let mut f = 0.0;
    assert_eq!(
        unsafe { ising_free_energy(IsingFreeEnergyMethod::Onsager, 0.3, 0.3, 0.0, 512, &mut f) },
        IsingStatus::Ok
    );
    let mut g = 0.0;
    unsafe { ising_free_energy(IsingFreeEnergyMethod::Dirac, 0.3, 0.0, 0.0, 512, &mut g) };
    assert!((f - g).abs() < 1e-10);
}

#[test]
fn dimers() {
    let mut c = 0.0;
    assert_eq!(
        unsafe { ising_dimer_count(8, 8, 1.0, 1.0, IsingBoundary::Free, &mut c) },
        IsingStatus::Ok
    );
    assert_eq!(c.round(), 12_988_816.0);
    assert_eq!(
        unsafe { ising_dimer_count(4, 4, 1.0, 1.0, IsingBoundary::Torus, &mut c) },
        IsingStatus::Ok
    );
    assert_eq!(c.round(), 272.0);
}

#[test]
fn lattice_handle() {
    let mut lat = ptr::null_mut();
    let st = unsafe {
        ising_lattice_new(
            4,
            4,
            IsingGeometry::Square,
            IsingBoundary::Torus,
            0.3,
            0.5,
            f64::NAN,
            0.0,
            &mut lat,
        )
    };
    assert_eq!(st, IsingStatus::Ok);
    assert_eq!(unsafe { ising_lattice_num_sites(lat) }, 16);
    let mut values = Vec::new();
    for m in [
        IsingMethod::Oracle,
        IsingMethod::Transfer,
        IsingMethod::Kaufman,
        IsingMethod::Pfaffian,
        IsingMethod::KacWard,
    ] {
        let (mut z, mut per_site) = (0.0, -1);
        assert_eq!(
            unsafe { ising_lattice_log_z(lat, m, &mut z, &mut per_site) },
            IsingStatus::Ok
        );
        assert_eq!(per_site, 0);
        values.push(z);
    }
    assert!(values.iter().all(|z| (z - values[0]).abs() < 1e-10));
    let mut z = 0.0;
    assert_eq!(
        unsafe { ising_lattice_log_z(lat, IsingMethod::ChainTransfer, &mut z, ptr::null_mut()) },
        IsingStatus::Domain
    );
    unsafe { ising_lattice_free(lat) };
}

#[test]
fn errors_and_messages() {
    assert_eq!(
        unsafe { ising_dual_coupling(0.3, ptr::null_mut()) },
        IsingStatus::NullPointer
    );
    let mut d = 0.0;
    assert_eq!(
        unsafe { ising_dual_coupling(-1.0, &mut d) },
        IsingStatus::Domain
    );
    let msg = unsafe { CStr::from_ptr(ising_last_error()) }
        .to_str()
        .unwrap();
    assert!(!msg.is_empty());
    let mut lat = ptr::null_mut();
    let st = unsafe {
        ising_lattice_new(
            6,
            6,
            IsingGeometry::Square,
            IsingBoundary::Torus,
            0.3,
            0.3,
            f64::NAN,
            0.0,
            &mut lat,
        )
    };
    assert_eq!(st, IsingStatus::Ok);
    let mut z = 0.0;
    assert_eq!(
        unsafe { ising_lattice_log_z(lat, IsingMethod::Oracle, &mut z, ptr::null_mut()) },
        IsingStatus::Capacity
    );
    unsafe { ising_lattice_free(lat) };
    assert_eq!(
        unsafe { ising_lattice_log_z(ptr::null(), IsingMethod::Oracle, &mut z, ptr::null_mut()) },
        IsingStatus::NullPointer
    );
    let s = unsafe { CStr::from_ptr(ising_status_str(IsingStatus::Capacity)) };
    assert!(s.to_str().unwrap().contains("capacity"));
}

#[test]
fn skew_matrix_handle() {
    let mut m = ptr::null_mut();
    assert_eq!(unsafe { ising_skew_new(4, &mut m) }, IsingStatus::Ok);
    let entries = [
        (0, 1, 2.0),
        (0, 2, 3.0),
        (0, 3, 5.0),
        (1, 2, 7.0),
        (1, 3, 11.0),
        (2, 3, 13.0),
    ];
    for (i, j, x) in entries {
        assert_eq!(unsafe { ising_skew_set(m, i, j, x) }, IsingStatus::Ok);
    }
    let mut x = 0.0;
    unsafe { ising_skew_get(m, 3, 1, &mut x) };
    assert_eq!(x, -11.0);
    let (mut sign, mut ln_abs) = (0, 0.0);
    assert_eq!(
        unsafe { ising_skew_pfaffian(m, &mut sign, &mut ln_abs) },
        IsingStatus::Ok
    );
    let pf = sign as f64 * ln_abs.exp();
    assert!((pf - (2.0 * 13.0 - 3.0 * 11.0 + 5.0 * 7.0)).abs() < 1e-12);
    assert_eq!(
        unsafe { ising_skew_set(m, 2, 2, 1.0) },
        IsingStatus::InvalidArgument
    );
    assert_eq!(
        unsafe { ising_skew_set(m, 0, 9, 1.0) },
        IsingStatus::InvalidArgument
    );
    unsafe { ising_skew_free(m) };
    assert_eq!(unsafe { ising_skew_new(3, &mut m) }, IsingStatus::Domain);
}

#[test]
fn star_triangle_map() {
    let l = [0.7, 0.9, 1.1];
    let mut k = [0.0; 3];
    let (mut r, mut modulus) = (0.0, 0.0);
    assert_eq!(
        unsafe { ising_star_to_triangle(l.as_ptr(), k.as_mut_ptr(), &mut r, &mut modulus) },
        IsingStatus::Ok
    );
    for i in 0..3 {
        let p = (2.0 * k[i]).sinh() * (2.0 * l[i]).sinh();
        assert!((p * modulus - 1.0).abs() < 1e-10);
    }
    assert!(r > 0.0);
}

#[test]
fn header_is_generated() {
    let header = std::fs::read_to_string(concat!(
        env!("CARGO_MANIFEST_DIR"),
        "/include/ising_exact.h"
    ))
    .unwrap();
    for name in [
        "ising_lattice_new",
        "ising_skew_pfaffian",
        "ISING_STATUS_CAPACITY",
        "IsingLattice",
    ] {
        assert!(header.contains(name), "{name} missing from header");
    }
}
