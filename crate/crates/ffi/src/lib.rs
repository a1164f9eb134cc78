//! C ABI over `ising-exact`. Every fallible call returns an [`IsingStatus`] and writes
//! results through out-pointers; the message for the last failure on the calling thread
//! is available from [`ising_last_error`].

use std::cell::RefCell;
use std::ffi::{c_char, c_int, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use ising_exact::cli::{z_method, ZMethod};
use ising_exact::oracle::MatchingWeights;
use ising_exact::pfaffian::{dimer_count_pfaffian, pfaffian, SkewMatrix};
use ising_exact::spectral::dimer_count_free;
use ising_exact::startriangle::{complete_elliptic, correlation_f, star_to_triangle};
use ising_exact::thermo::{self, QuadratureSpec};
use ising_exact::{dual_coupling, Boundary, Error, Geometry, LatticeSpec, ReducedCouplings};

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum IsingStatus {
    Ok = 0,
    NullPointer = 1,
    Domain = 2,
    Capacity = 3,
    Singular = 4,
    InvalidArgument = 5,
    Panic = 6,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum IsingGeometry {
    Chain = 0,
    Square = 1,
    Triangular = 2,
    Honeycomb = 3,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum IsingBoundary {
    Free = 0,
    CylinderH = 1,
    CylinderV = 2,
    Torus = 3,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum IsingMethod {
    Oracle = 0,
    Transfer = 1,
    Kaufman = 2,
    Pfaffian = 3,
    KacWard = 4,
    ChainTransfer = 5,
    ChainRecursive = 6,
    ChainInduction = 7,
    TriangularSpectral = 8,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum IsingFreeEnergyMethod {
    Onsager = 0,
    Fermionic = 1,
    Dirac = 2,
    Triangular = 3,
}

/// Opaque lattice with its couplings.
pub struct IsingLattice {
    spec: LatticeSpec,
    couplings: ReducedCouplings,
}

/// Opaque dense antisymmetric matrix.
pub struct IsingSkewMatrix(SkewMatrix);

thread_local! {
    static LAST_ERROR: RefCell<CString> = RefCell::new(CString::default());
}

struct Failure(IsingStatus, String);

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let status = match e {
            Error::Domain(_) => IsingStatus::Domain,
            Error::Capacity { .. } => IsingStatus::Capacity,
            Error::Singular(_) => IsingStatus::Singular,
        };
        Failure(status, e.to_string())
    }
}

fn null(name: &str) -> Failure {
    Failure(IsingStatus::NullPointer, format!("{name} is null"))
}

fn set_last_error(msg: String) {
    let c = CString::new(msg.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = c);
}

fn guard<F: FnOnce() -> Result<(), Failure>>(f: F) -> IsingStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => IsingStatus::Ok,
        Ok(Err(Failure(status, msg))) => {
            set_last_error(msg);
            status
        }
        Err(_) => {
            set_last_error("internal panic".into());
            IsingStatus::Panic
        }
    }
}

unsafe fn write<T>(out: *mut T, name: &str, value: T) -> Result<(), Failure> {
    if out.is_null() {
        return Err(null(name));
    }
    unsafe { out.write(value) };
    Ok(())
}

/// Static description of a status code.
#[no_mangle]
pub extern "C" fn ising_status_str(status: IsingStatus) -> *const c_char {
    let s: &'static [u8] = match status {
        IsingStatus::Ok => b"ok\0",
        IsingStatus::NullPointer => b"null pointer\0",
        IsingStatus::Domain => b"argument outside the domain\0",
        IsingStatus::Capacity => b"problem size above the method's capacity\0",
        IsingStatus::Singular => b"numerically singular\0",
        IsingStatus::InvalidArgument => b"invalid argument\0",
        IsingStatus::Panic => b"internal panic\0",
    };
    s.as_ptr().cast()
}

/// Message of the last failed call on this thread; valid until the next failure on this thread.
#[no_mangle]
pub extern "C" fn ising_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ptr())
}

#[no_mangle]
pub extern "C" fn ising_critical_coupling() -> f64 {
    thermo::critical_point_square()
}

/// # Safety
/// `out` must be null or valid for writes.
#[no_mangle]
pub unsafe extern "C" fn ising_dual_coupling(k: f64, out: *mut f64) -> IsingStatus {
    guard(|| unsafe { write(out, "out", dual_coupling(k)?) })
}

/// `-beta f` per site. `k2` and `k3` are ignored where the method has fewer couplings.
///
/// # Safety
/// `out` must be null or valid for writes.
#[no_mangle]
pub unsafe extern "C" fn ising_free_energy(
    method: IsingFreeEnergyMethod,
    k1: f64,
    k2: f64,
    k3: f64,
    points: usize,
    out: *mut f64,
) -> IsingStatus {
    guard(|| {
        let q = QuadratureSpec::new(points)?;
        let f = match method {
            IsingFreeEnergyMethod::Onsager => thermo::onsager_free_energy(k1, k2, &q)?,
            IsingFreeEnergyMethod::Fermionic => thermo::fermionic_free_energy(k1, &q)?,
            IsingFreeEnergyMethod::Dirac => thermo::dirac_free_energy(k1, &q)?,
            IsingFreeEnergyMethod::Triangular => thermo::triangular_free_energy(k1, k2, k3, &q)?,
        };
        unsafe { write(out, "out", f) }
    })
}

/// Weighted perfect-matching count of an `rows x cols` grid: the closed-form product for
/// free boundaries, the Pfaffian otherwise.
///
/// # Safety
/// `out` must be null or valid for writes.
#[no_mangle]
pub unsafe extern "C" fn ising_dimer_count(
    rows: usize,
    cols: usize,
    z1: f64,
    z2: f64,
    boundary: IsingBoundary,
    out: *mut f64,
) -> IsingStatus {
    guard(|| {
        let spec = LatticeSpec::new(rows, cols, Geometry::Square, boundary.into())?;
        let w = MatchingWeights::new(z1, z2)?;
        let count = if spec.boundary() == Boundary::Free {
            dimer_count_free(rows, cols, w)?.raw
        } else if rows * cols % 2 == 1 {
            0.0
        } else {
            dimer_count_pfaffian(&spec, w)?
        };
        unsafe { write(out, "out", count) }
    })
}

/// Triangular couplings, scale `R` and modulus `k` for honeycomb couplings `l[0..3]`.
///
/// # Safety
/// `l` must point to 3 readable doubles and `k_out` to 3 writable doubles;
/// `r_out` and `modulus_out` must be null or valid for writes.
#[no_mangle]
pub unsafe extern "C" fn ising_star_to_triangle(
    l: *const f64,
    k_out: *mut f64,
    r_out: *mut f64,
    modulus_out: *mut f64,
) -> IsingStatus {
    guard(|| {
        if l.is_null() {
            return Err(null("l"));
        }
        if k_out.is_null() {
            return Err(null("k_out"));
        }
        let l = unsafe { std::slice::from_raw_parts(l, 3) };
        let map = star_to_triangle(l[0], l[1], l[2])?;
        unsafe {
            ptr::copy_nonoverlapping(map.k.as_ptr(), k_out, 3);
            if !r_out.is_null() {
                r_out.write(map.r);
            }
            if !modulus_out.is_null() {
                modulus_out.write(map.k_modulus);
            }
        }
        Ok(())
    })
}

/// Complete elliptic integrals `K(k)` and `E(k)` for `0 <= k < 1`.
///
/// # Safety
/// `k_out` and `e_out` must be null or valid for writes.
#[no_mangle]
pub unsafe extern "C" fn ising_complete_elliptic(
    k: f64,
    k_out: *mut f64,
    e_out: *mut f64,
) -> IsingStatus {
    guard(|| {
        let p = complete_elliptic(k)?;
        unsafe {
            write(k_out, "k_out", p.k_val)?;
            write(e_out, "e_out", p.e_val)
        }
    })
}

/// Nearest-neighbour correlation `f(K, k)`.
///
/// # Safety
/// `out` must be null or valid for writes.
#[no_mangle]
pub unsafe extern "C" fn ising_correlation_f(big_k: f64, k: f64, out: *mut f64) -> IsingStatus {
    guard(|| unsafe { write(out, "out", correlation_f(big_k, k)?) })
}

/// Creates a lattice handle. Pass NaN for `kd` on lattices without a third coupling;
/// a nonzero `h` is accepted on chains only.
///
/// # Safety
/// `out` must be null or valid for writes. The handle must be released with
/// [`ising_lattice_free`].
#[no_mangle]
#[allow(clippy::too_many_arguments)]
pub unsafe extern "C" fn ising_lattice_new(
    rows: usize,
    cols: usize,
    geometry: IsingGeometry,
    boundary: IsingBoundary,
    kh: f64,
    kv: f64,
    kd: f64,
    h: f64,
    out: *mut *mut IsingLattice,
) -> IsingStatus {
    guard(|| {
        if out.is_null() {
            return Err(null("out"));
        }
        let spec = LatticeSpec::new(rows, cols, geometry.into(), boundary.into())?;
        let couplings = ReducedCouplings {
            k_h: kh,
            k_v: kv,
            k_d: (!kd.is_nan()).then_some(kd),
            h: (h != 0.0).then_some(h),
        };
        couplings.validate()?;
        let handle = Box::new(IsingLattice { spec, couplings });
        unsafe { out.write(Box::into_raw(handle)) };
        Ok(())
    })
}

/// `ln Z` of the lattice by one method; `per_site` is set to 1 when the value is per site.
///
/// # Safety
/// `lattice` must come from [`ising_lattice_new`]; `log_z` must be valid for writes and
/// `per_site` null or valid for writes.
#[no_mangle]
pub unsafe extern "C" fn ising_lattice_log_z(
    lattice: *const IsingLattice,
    method: IsingMethod,
    log_z: *mut f64,
    per_site: *mut c_int,
) -> IsingStatus {
    guard(|| {
        let lat = unsafe { lattice.as_ref() }.ok_or_else(|| null("lattice"))?;
        let r = z_method(method.into(), &lat.spec, &lat.couplings)?;
        unsafe {
            write(log_z, "log_z", r.log_z)?;
            if !per_site.is_null() {
                per_site.write(c_int::from(r.per_site));
            }
        }
        Ok(())
    })
}

/// Number of sites of the lattice, or 0 for a null handle.
///
/// # Safety
/// `lattice` must be null or come from [`ising_lattice_new`].
#[no_mangle]
pub unsafe extern "C" fn ising_lattice_num_sites(lattice: *const IsingLattice) -> usize {
    unsafe { lattice.as_ref() }.map_or(0, |l| l.spec.num_sites())
}

/// # Safety
/// `lattice` must be null or come from [`ising_lattice_new`] and not be freed twice.
#[no_mangle]
pub unsafe extern "C" fn ising_lattice_free(lattice: *mut IsingLattice) {
    if !lattice.is_null() {
        drop(unsafe { Box::from_raw(lattice) });
    }
}

/// Creates a zero antisymmetric matrix of even dimension.
///
/// # Safety
/// `out` must be null or valid for writes. The handle must be released with
/// [`ising_skew_free`].
#[no_mangle]
pub unsafe extern "C" fn ising_skew_new(dim: usize, out: *mut *mut IsingSkewMatrix) -> IsingStatus {
    guard(|| {
        if out.is_null() {
            return Err(null("out"));
        }
        let m = Box::new(IsingSkewMatrix(SkewMatrix::zeros(dim)?));
        unsafe { out.write(Box::into_raw(m)) };
        Ok(())
    })
}

fn check_index(m: &SkewMatrix, i: usize, j: usize) -> Result<(), Failure> {
    if i >= m.dim() || j >= m.dim() {
        return Err(Failure(
            IsingStatus::InvalidArgument,
            format!("index ({i}, {j}) outside a {0}x{0} matrix", m.dim()),
        ));
    }
    if i == j {
        return Err(Failure(
            IsingStatus::InvalidArgument,
            "diagonal entries are zero".into(),
        ));
    }
    Ok(())
}

/// Sets `a[i][j] = x` and `a[j][i] = -x`.
///
/// # Safety
/// `m` must come from [`ising_skew_new`].
#[no_mangle]
pub unsafe extern "C" fn ising_skew_set(
    m: *mut IsingSkewMatrix,
    i: usize,
    j: usize,
    x: f64,
) -> IsingStatus {
    guard(|| {
        let m = unsafe { m.as_mut() }.ok_or_else(|| null("matrix"))?;
        check_index(&m.0, i, j)?;
        if !x.is_finite() {
            return Err(Failure(
                IsingStatus::Domain,
                format!("entry must be finite, got {x}"),
            ));
        }
        m.0.set(i, j, x);
        Ok(())
    })
}

/// # Safety
/// `m` must come from [`ising_skew_new`]; `out` must be null or valid for writes.
#[no_mangle]
pub unsafe extern "C" fn ising_skew_get(
    m: *const IsingSkewMatrix,
    i: usize,
    j: usize,
    out: *mut f64,
) -> IsingStatus {
    guard(|| {
        let m = unsafe { m.as_ref() }.ok_or_else(|| null("matrix"))?;
        if i >= m.0.dim() || j >= m.0.dim() {
            return Err(Failure(
                IsingStatus::InvalidArgument,
                format!("index ({i}, {j}) out of range"),
            ));
        }
        unsafe { write(out, "out", m.0.get(i, j)) }
    })
}

/// Pfaffian as `sign * exp(ln_abs)`; a zero Pfaffian has sign 0 and `ln_abs = -inf`.
///
/// # Safety
/// `m` must come from [`ising_skew_new`]; `sign` and `ln_abs` must be null or valid for writes.
#[no_mangle]
pub unsafe extern "C" fn ising_skew_pfaffian(
    m: *const IsingSkewMatrix,
    sign: *mut c_int,
    ln_abs: *mut f64,
) -> IsingStatus {
    guard(|| {
        let m = unsafe { m.as_ref() }.ok_or_else(|| null("matrix"))?;
        let pf = pfaffian(&m.0)?;
        unsafe {
            write(sign, "sign", pf.sign as c_int)?;
            write(ln_abs, "ln_abs", pf.ln_abs)
        }
    })
}

/// # Safety
/// `m` must be null or come from [`ising_skew_new`] and not be freed twice.
#[no_mangle]
pub unsafe extern "C" fn ising_skew_free(m: *mut IsingSkewMatrix) {
    if !m.is_null() {
        drop(unsafe { Box::from_raw(m) });
    }
}

impl From<IsingGeometry> for Geometry {
    fn from(g: IsingGeometry) -> Self {
        match g {
            IsingGeometry::Chain => Geometry::Chain,
            IsingGeometry::Square => Geometry::Square,
            IsingGeometry::Triangular => Geometry::Triangular,
            IsingGeometry::Honeycomb => Geometry::Honeycomb,
        }
    }
}

impl From<IsingBoundary> for Boundary {
    fn from(b: IsingBoundary) -> Self {
        match b {
            IsingBoundary::Free => Boundary::Free,
            IsingBoundary::CylinderH => Boundary::CylinderH,
            IsingBoundary::CylinderV => Boundary::CylinderV,
            IsingBoundary::Torus => Boundary::Torus,
        }
    }
}

impl From<IsingMethod> for ZMethod {
    fn from(m: IsingMethod) -> Self {
        match m {
            IsingMethod::Oracle => ZMethod::Oracle,
            IsingMethod::Transfer => ZMethod::Transfer,
            IsingMethod::Kaufman => ZMethod::Kaufman,
            IsingMethod::Pfaffian => ZMethod::Pfaffian,
            IsingMethod::KacWard => ZMethod::Kacward,
            IsingMethod::ChainTransfer => ZMethod::ChainTransfer,
            IsingMethod::ChainRecursive => ZMethod::ChainRecursive,
            IsingMethod::ChainInduction => ZMethod::ChainInduction,
            IsingMethod::TriangularSpectral => ZMethod::TriangularSpectral,
        }
    }
}
