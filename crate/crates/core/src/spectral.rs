//! Closed-form finite lattices from hyperbolic-angle spectra: the torus
//! four-product, the four grid products of the torus, free-boundary dimer
//! counts and the triangular double sum.

use std::f64::consts::{LN_2, PI};

use rayon::prelude::*;

use crate::error::{check_finite, domain, Error, Result};
use crate::model::dual_coupling;
use crate::numeric::{acosh_1p, ln_2cosh, ln_2sinh_abs, SignedLog};
use crate::oracle::MatchingWeights;

/// Hyperbolic angles `gamma_0 .. gamma_(2n-1)`; `gamma_0` keeps its sign.
#[derive(Debug, Clone, PartialEq)]
pub struct GammaSpectrum {
    n: usize,
    gamma: Vec<f64>,
}

impl GammaSpectrum {
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn gamma(&self) -> &[f64] {
        &self.gamma
    }
}

/// `cosh gamma_k = cosh 2k_t* cosh 2k_s - cos(pi k / n) sinh 2k_t* sinh 2k_s`,
/// with `gamma_0 = 2(k_s - k_t*)`.
pub fn gamma_spectrum(n: usize, k_t: f64, k_s: f64) -> Result<GammaSpectrum> {
    if n == 0 {
        return Err(domain("spectrum needs n >= 1"));
    }
    check_finite("k_s", k_s)?;
    if k_s < 0.0 {
        return Err(domain(format!("k_s must be non-negative, got {k_s}")));
    }
    let kd = dual_coupling(k_t)?;
    let base = 2.0 * (kd - k_s).sinh().powi(2);
    let cross = (2.0 * kd).sinh() * (2.0 * k_s).sinh();
    let gamma = (0..2 * n)
        .map(|k| {
            if k == 0 {
                return 2.0 * (k_s - kd);
            }
            let k = k.min(2 * n - k);
            let half = (PI * k as f64 / (2 * n) as f64).sin();
            acosh_1p(base + 2.0 * half * half * cross)
        })
        .collect();
    Ok(GammaSpectrum { n, gamma })
}

/// `ln Z` of the `m x n` torus: rows of length `n` coupled by `k_s`, stacked `m` times with `k_t`.
pub fn kaufman_partition(m: usize, n: usize, k_t: f64, k_s: f64) -> Result<f64> {
    if m == 0 {
        return Err(domain("torus needs m >= 1"));
    }
    if !(k_t > 0.0 && k_s > 0.0) {
        return Err(domain("the four-product needs positive couplings"));
    }
    let spec = gamma_spectrum(n, k_t, k_s)?;
    let half_m = m as f64 / 2.0;
    let mut terms = Vec::with_capacity(4);
    for parity in [1, 0] {
        let gs = spec
            .gamma
            .iter()
            .skip(parity)
            .step_by(2)
            .map(|g| half_m * g);
        let cosh = SignedLog {
            sign: 1.0,
            ln_abs: gs.clone().map(ln_2cosh).sum(),
        };
        let mut sinh = SignedLog::ONE;
        for x in gs {
            if x == 0.0 {
                sinh = SignedLog::ZERO;
                break;
            }
            sinh.sign *= x.signum();
            sinh.ln_abs += ln_2sinh_abs(x);
        }
        terms.push(cosh);
        terms.push(sinh);
    }
    let total = SignedLog::sum(&terms);
    if total.sign <= 0.0 {
        return Err(Error::Singular("four-product sum is not positive".into()));
    }
    let pref = -LN_2 + (m * n) as f64 / 2.0 * (2.0 * (2.0 * k_t).sinh()).ln();
    Ok(pref + total.ln_abs)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Parity {
    /// Angles `2 pi j / L`.
    Integer,
    /// Angles `(2j - 1) pi / L`.
    Half,
}

impl Parity {
    pub fn angles(self, len: usize) -> impl Iterator<Item = f64> {
        let l = len as f64;
        (0..len).map(move |j| match self {
            Parity::Integer => 2.0 * PI * j as f64 / l,
            Parity::Half => (2 * j + 1) as f64 * PI / l,
        })
    }

    /// Whether angle `j` of the grid is its own negative modulo `2 pi`.
    fn self_paired(self, j: usize, len: usize) -> bool {
        match self {
            Parity::Integer => 2 * j == 0 || 2 * j == len,
            Parity::Half => 2 * j + 1 == len,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct GridParity {
    pub parity_h: Parity,
    pub parity_v: Parity,
}

impl GridParity {
    pub const ALL: [GridParity; 4] = [
        GridParity::new(Parity::Integer, Parity::Integer),
        GridParity::new(Parity::Integer, Parity::Half),
        GridParity::new(Parity::Half, Parity::Integer),
        GridParity::new(Parity::Half, Parity::Half),
    ];

    pub const fn new(parity_h: Parity, parity_v: Parity) -> Self {
        GridParity { parity_h, parity_v }
    }
}

/// A grid product `P` together with the sign of its natural square root.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GridProduct {
    pub ln_p: f64,
    pub sqrt_sign: f64,
    pub zero: bool,
}

impl GridProduct {
    pub fn sqrt(&self) -> SignedLog {
        if self.zero {
            SignedLog::ZERO
        } else {
            SignedLog {
                sign: self.sqrt_sign,
                ln_abs: 0.5 * self.ln_p,
            }
        }
    }
}

const ZERO_FACTOR: f64 = 1e-300;
/// A linear root within rounding of zero is the critical zero itself.
const ROOT_ROUNDING: f64 = 8.0 * f64::EPSILON;

/// `P = prod_(theta, phi) [(1+x^2)(1+y^2) - 2x(1-y^2) cos theta - 2y(1-x^2) cos phi]`,
/// `x = tanh k_h`, `y = tanh k_v`, with `theta` on the `n`-point grid and `phi` on the `m`-point grid.
pub fn kacward_products(
    m: usize,
    n: usize,
    k_h: f64,
    k_v: f64,
    gp: GridParity,
) -> Result<GridProduct> {
    if m == 0 || n == 0 {
        return Err(domain("grid needs m, n >= 1"));
    }
    if !(k_h > 0.0 && k_v > 0.0) || !k_h.is_finite() || !k_v.is_finite() {
        return Err(domain("grid products need positive finite couplings"));
    }
    let (x, y) = (k_h.tanh(), k_v.tanh());
    let a = (1.0 + x * x) * (1.0 + y * y);
    let (bx, by) = (2.0 * x * (1.0 - y * y), 2.0 * y * (1.0 - x * x));
    let thetas: Vec<f64> = gp.parity_h.angles(n).collect();
    let phis: Vec<f64> = gp.parity_v.angles(m).collect();
    let rows: Vec<(f64, f64, bool)> = phis
        .par_iter()
        .enumerate()
        .map(|(i, phi)| {
            let (mut ln, mut sign, mut zero) = (0.0, 1.0, false);
            for (j, theta) in thetas.iter().enumerate() {
                let (ct, cp) = (theta.cos(), phi.cos());
                let paired = gp.parity_h.self_paired(j, n) && gp.parity_v.self_paired(i, m);
                // self-paired factors are perfect squares; use the exact root
                let (f, vanishes) = if paired {
                    let r =
                        1.0 - ct.signum() * x - cp.signum() * y - ct.signum() * cp.signum() * x * y;
                    sign *= r.signum();
                    (r * r, r.abs() <= ROOT_ROUNDING * (1.0 + x + y + x * y))
                } else {
                    let f = a - bx * ct - by * cp;
                    (f, f.abs() < ZERO_FACTOR)
                };
                if vanishes {
                    zero = true;
                } else {
                    ln += f.ln();
                }
            }
            (ln, sign, zero)
        })
        .collect();
    Ok(GridProduct {
        ln_p: rows.iter().map(|r| r.0).sum(),
        sqrt_sign: rows.iter().map(|r| r.1).product(),
        zero: rows.iter().any(|r| r.2),
    })
}

/// `ln Z = mn ln(2 cosh k_h cosh k_v) + ln(1/2 (-sqrt P1 + sqrt P2 + sqrt P3 + sqrt P4))`.
pub fn kacward_partition(m: usize, n: usize, k_h: f64, k_v: f64) -> Result<f64> {
    let mut terms = Vec::with_capacity(4);
    for (i, gp) in GridParity::ALL.iter().enumerate() {
        let s = kacward_products(m, n, k_h, k_v, *gp)?.sqrt();
        terms.push(if i == 0 { -s } else { s });
    }
    let total = SignedLog::sum(&terms);
    if total.sign <= 0.0 {
        return Err(Error::Singular(
            "grid-product combination is not positive".into(),
        ));
    }
    let pref = (m * n) as f64 * (ln_2cosh(k_h) + ln_2cosh(k_v) - LN_2);
    Ok(pref - LN_2 + total.ln_abs)
}

/// Weighted dimer count of a free rectangle from the product formula.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DimerCount {
    pub ln_value: f64,
    pub raw: f64,
    pub rounded: Option<u128>,
}

impl DimerCount {
    fn from_ln(ln_value: f64, integral: bool) -> Self {
        let raw = ln_value.exp();
        let rounded = (integral && raw < 1e30).then(|| raw.round() as u128);
        DimerCount {
            ln_value,
            raw,
            rounded,
        }
    }
}

/// `prod_(k <= m/2) prod_(j <= n) 2 sqrt(z2^2 cos^2(pi k/(m+1)) + z1^2 cos^2(pi j/(n+1)))`
/// for `m` rows, `n` columns, `z1` on horizontal and `z2` on vertical bonds.
pub fn dimer_count_free(m: usize, n: usize, w: MatchingWeights) -> Result<DimerCount> {
    let w = MatchingWeights::new(w.z1, w.z2)?;
    if m == 0 || n == 0 {
        return Err(domain("grid needs m, n >= 1"));
    }
    let integral = w.z1 == 1.0 && w.z2 == 1.0;
    if m % 2 == 1 && n % 2 == 1 {
        return Ok(DimerCount::from_ln(f64::NEG_INFINITY, integral));
    }
    let (m, n, z_col, z_row) = if m.is_multiple_of(2) {
        (m, n, w.z2, w.z1)
    } else {
        (n, m, w.z1, w.z2)
    };
    let rows: Vec<f64> = (1..=m / 2)
        .into_par_iter()
        .map(|k| {
            let a = z_col * (PI * k as f64 / (m + 1) as f64).cos();
            (1..=n)
                .map(|j| {
                    let b = z_row * (PI * j as f64 / (n + 1) as f64).cos();
                    LN_2 + a.hypot(b).ln()
                })
                .sum()
        })
        .collect();
    Ok(DimerCount::from_ln(rows.iter().sum(), integral))
}

/// Finite `m x n` proxy of `ln Z` per site on the triangular lattice:
/// `ln 2 + 1/(2mn) sum_(k,l) ln[c1 c2 c3 + s1 s2 s3 - s1 cos w1 - s2 cos w2 - s3 cos(w1 + w2)]`
/// with `w1 = 2 pi k/m`, `w2 = 2 pi l/n`, `c_i = cosh 2K_i`, `s_i = sinh 2K_i`.
pub fn triangular_log_z_per_site(m: usize, n: usize, k1: f64, k2: f64, k3: f64) -> Result<f64> {
    if m == 0 || n == 0 {
        return Err(domain("grid needs m, n >= 1"));
    }
    for (name, k) in [("k1", k1), ("k2", k2), ("k3", k3)] {
        check_finite(name, k)?;
        if k < 0.0 {
            return Err(domain(format!("{name} must be non-negative")));
        }
    }
    if k1 == 0.0 && k2 == 0.0 && k3 == 0.0 {
        return Ok(LN_2);
    }
    let kernel = TriangularKernel::new(k1, k2, k3);
    let w2: Vec<(f64, f64)> = (0..n)
        .map(|l| (2.0 * PI * l as f64 / n as f64).sin_cos())
        .collect();
    let rows: Vec<Result<f64>> = (0..m)
        .into_par_iter()
        .map(|k| {
            let (s1, c1) = (2.0 * PI * k as f64 / m as f64).sin_cos();
            let mut acc = 0.0;
            for &(s2, c2) in &w2 {
                let f = kernel.eval(c1, s1, c2, s2);
                if f < ZERO_FACTOR {
                    return Err(Error::Singular(
                        "triangular bracket vanishes on the grid (critical couplings)".into(),
                    ));
                }
                acc += f.ln();
            }
            Ok(acc)
        })
        .collect();
    let mut total = 0.0;
    for r in rows {
        total += r?;
    }
    Ok(LN_2 + total / (2 * m * n) as f64)
}

/// The bracket `c1 c2 c3 + s1 s2 s3 - s1 cos w1 - s2 cos w2 - s3 cos(w1 + w2)`.
#[derive(Debug, Clone, Copy)]
pub(crate) struct TriangularKernel {
    constant: f64,
    s: [f64; 3],
}

impl TriangularKernel {
    pub(crate) fn new(k1: f64, k2: f64, k3: f64) -> Self {
        let c = [k1, k2, k3].map(|k| (2.0 * k).cosh());
        let s = [k1, k2, k3].map(|k| (2.0 * k).sinh());
        TriangularKernel {
            constant: c[0] * c[1] * c[2] + s[0] * s[1] * s[2],
            s,
        }
    }

    /// Takes `cos` and `sin` of both angles.
    pub(crate) fn eval(&self, c1: f64, s1: f64, c2: f64, s2: f64) -> f64 {
        self.constant - self.s[0] * c1 - self.s[1] * c2 - self.s[2] * (c1 * c2 - s1 * s2)
    }
}
