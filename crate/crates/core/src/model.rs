//! Shared domain types in reduced units.

use std::collections::BTreeMap;
use std::fmt;

use crate::error::{check_finite, domain, Result};

/// Self-dual coupling of the isotropic square lattice, `ln(1 + sqrt 2) / 2`.
pub const K_C: f64 = 0.440_686_793_509_771_5;

/// Dimensionless couplings `K = beta J` per bond family, plus an optional field.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ReducedCouplings {
    pub k_h: f64,
    pub k_v: f64,
    pub k_d: Option<f64>,
    pub h: Option<f64>,
}

impl ReducedCouplings {
    pub fn square(k_h: f64, k_v: f64) -> Self {
        ReducedCouplings {
            k_h,
            k_v,
            k_d: None,
            h: None,
        }
    }

    pub fn isotropic(k: f64) -> Self {
        Self::square(k, k)
    }

    pub fn triangular(k_h: f64, k_v: f64, k_d: f64) -> Self {
        ReducedCouplings {
            k_h,
            k_v,
            k_d: Some(k_d),
            h: None,
        }
    }

    pub fn chain(k: f64, h: f64) -> Self {
        ReducedCouplings {
            k_h: k,
            k_v: 0.0,
            k_d: None,
            h: Some(h),
        }
    }

    pub fn field(&self) -> f64 {
        self.h.unwrap_or(0.0)
    }

    pub fn validate(&self) -> Result<()> {
        check_finite("k_h", self.k_h)?;
        check_finite("k_v", self.k_v)?;
        if let Some(k) = self.k_d {
            check_finite("k_d", k)?;
        }
        if let Some(h) = self.h {
            check_finite("h", h)?;
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Geometry {
    Chain,
    Square,
    Triangular,
    Honeycomb,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Boundary {
    Free,
    /// Periodic along each row (horizontal wrap).
    CylinderH,
    /// Periodic along each column (vertical wrap).
    CylinderV,
    Torus,
}

impl Boundary {
    pub fn wraps_h(self) -> bool {
        matches!(self, Boundary::CylinderH | Boundary::Torus)
    }

    pub fn wraps_v(self) -> bool {
        matches!(self, Boundary::CylinderV | Boundary::Torus)
    }
}

/// Lattice shape. For honeycomb, `rows x cols` counts unit cells of two sites each.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct LatticeSpec {
    rows: usize,
    cols: usize,
    geometry: Geometry,
    boundary: Boundary,
}

impl LatticeSpec {
    pub fn new(rows: usize, cols: usize, geometry: Geometry, boundary: Boundary) -> Result<Self> {
        if rows == 0 || cols == 0 {
            return Err(domain(format!(
                "lattice sides must be positive, got {rows}x{cols}"
            )));
        }
        if geometry == Geometry::Chain && rows != 1 {
            return Err(domain("a chain has exactly one row"));
        }
        if geometry == Geometry::Chain && boundary == Boundary::CylinderV {
            return Err(domain("a chain can only wrap horizontally"));
        }
        Ok(LatticeSpec {
            rows,
            cols,
            geometry,
            boundary,
        })
    }

    pub fn square_torus(rows: usize, cols: usize) -> Result<Self> {
        Self::new(rows, cols, Geometry::Square, Boundary::Torus)
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn geometry(&self) -> Geometry {
        self.geometry
    }

    pub fn boundary(&self) -> Boundary {
        self.boundary
    }

    pub fn num_sites(&self) -> usize {
        match self.geometry {
            Geometry::Honeycomb => 2 * self.rows * self.cols,
            _ => self.rows * self.cols,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Method {
    Oracle,
    Transfer,
    Kaufman,
    Pfaffian,
    KacWard,
    ChainTransfer,
    ChainRecursive,
    ChainInduction,
    TriangularSpectral,
    Onsager,
    Fermionic,
    Dirac,
    Triangular,
}

impl Method {
    pub fn as_str(self) -> &'static str {
        match self {
            Method::Oracle => "oracle",
            Method::Transfer => "transfer",
            Method::Kaufman => "kaufman",
            Method::Pfaffian => "pfaffian",
            Method::KacWard => "kacward",
            Method::ChainTransfer => "chain-transfer",
            Method::ChainRecursive => "chain-recursive",
            Method::ChainInduction => "chain-induction",
            Method::TriangularSpectral => "triangular-spectral",
            Method::Onsager => "onsager",
            Method::Fermionic => "fermionic",
            Method::Dirac => "dirac",
            Method::Triangular => "triangular",
        }
    }
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// A computed `ln Z` together with what produced it.
#[derive(Debug, Clone, PartialEq)]
pub struct MethodResult {
    pub log_z: f64,
    pub per_site: bool,
    pub method: Method,
    pub params: BTreeMap<String, f64>,
}

impl MethodResult {
    pub fn new(method: Method, log_z: f64) -> Self {
        MethodResult {
            log_z,
            per_site: false,
            method,
            params: BTreeMap::new(),
        }
    }

    pub fn per_site(mut self) -> Self {
        self.per_site = true;
        self
    }

    pub fn with(mut self, key: &str, value: f64) -> Self {
        self.params.insert(key.to_owned(), value);
        self
    }
}

/// Kramers-Wannier dual, `artanh(exp(-2k))`, evaluated as `-ln(tanh k) / 2`.
pub fn dual_coupling(k: f64) -> Result<f64> {
    check_finite("k", k)?;
    if k <= 0.0 {
        return Err(domain(format!("dual coupling needs k > 0, got {k}")));
    }
    let x = (-2.0 * k).exp();
    Ok(-0.5 * (-2.0 * x / (1.0 + x)).ln_1p())
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;
    use proptest::prelude::*;

    #[test]
    fn self_dual_point() {
        assert_relative_eq!(K_C, 0.5 * (1.0 + 2f64.sqrt()).ln(), max_relative = 1e-16);
        assert_relative_eq!(dual_coupling(K_C).unwrap(), K_C, max_relative = 1e-14);
        assert_relative_eq!((2.0 * K_C).sinh(), 1.0, max_relative = 1e-15);
    }

    #[test]
    fn strong_coupling_maps_to_weak() {
        assert!(dual_coupling(5.0).unwrap() < 1e-4);
    }

    #[test]
    fn dual_by_root_finding() {
        // solve sinh(1) sinh(2x) = 1 by bisection
        let (mut lo, mut hi) = (1e-6f64, 5.0f64);
        for _ in 0..200 {
            let mid = 0.5 * (lo + hi);
            if 1f64.sinh() * (2.0 * mid).sinh() > 1.0 {
                hi = mid;
            } else {
                lo = mid;
            }
        }
        assert_relative_eq!(
            dual_coupling(0.5).unwrap(),
            0.5 * (lo + hi),
            max_relative = 1e-12
        );
    }

    #[test]
    fn rejects_bad_input() {
        assert!(matches!(dual_coupling(0.0), Err(crate::Error::Domain(_))));
        assert!(dual_coupling(-1.0).is_err());
        assert!(dual_coupling(f64::NAN).is_err());
    }

    #[test]
    fn spec_validation() {
        assert!(LatticeSpec::new(2, 5, Geometry::Chain, Boundary::Torus).is_err());
        assert!(LatticeSpec::new(0, 5, Geometry::Square, Boundary::Free).is_err());
        let s = LatticeSpec::new(3, 3, Geometry::Honeycomb, Boundary::Torus).unwrap();
        assert_eq!(s.num_sites(), 18);
    }

    proptest! {
        #[test]
        fn dual_is_an_involution(k in 0.05f64..5.0) {
            let d = dual_coupling(k).unwrap();
            prop_assert!(((2.0 * k).sinh() * (2.0 * d).sinh() - 1.0).abs() < 1e-12);
            let back = dual_coupling(d).unwrap();
            prop_assert!((back - k).abs() < 1e-12 * k);
        }

        #[test]
        fn dual_is_decreasing(a in 0.05f64..5.0, b in 0.05f64..5.0) {
            prop_assume!(a < b);
            prop_assert!(dual_coupling(a).unwrap() > dual_coupling(b).unwrap());
        }
    }
}
