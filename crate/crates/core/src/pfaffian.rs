//! Pfaffians of dense skew-symmetric matrices, Kasteleyn dimer matrices and
//! the four-Pfaffian torus solution of the Ising model.

use std::f64::consts::LN_2;

use num_complex::Complex64;
use rayon::prelude::*;

use crate::error::{check_capacity, domain, Error, Result};
use crate::model::{Boundary, Geometry, LatticeSpec};
use crate::numeric::{ln_2cosh, SignedLog};
use crate::oracle::MatchingWeights;
use crate::spectral::Parity;

pub const MAX_SKEW_DIM: usize = 4096;
const PIVOT_TOLERANCE: f64 = 1e-12;

/// Dense real antisymmetric matrix; writes keep `A = -A^T` exactly.
#[derive(Debug, Clone, PartialEq)]
pub struct SkewMatrix {
    dim: usize,
    data: Vec<f64>,
}

impl SkewMatrix {
    pub fn zeros(dim: usize) -> Result<Self> {
        check_capacity("skew matrix dimension", dim, MAX_SKEW_DIM)?;
        if dim == 0 || dim % 2 == 1 {
            return Err(domain(format!(
                "skew matrix dimension must be even and positive, got {dim}"
            )));
        }
        Ok(SkewMatrix {
            dim,
            data: vec![0.0; dim * dim],
        })
    }

    /// Builds from full rows, rejecting anything that is not exactly antisymmetric.
    pub fn from_rows(rows: &[Vec<f64>]) -> Result<Self> {
        let mut a = Self::zeros(rows.len())?;
        for (i, row) in rows.iter().enumerate() {
            if row.len() != a.dim {
                return Err(domain("skew matrix rows must be square"));
            }
            for (j, &x) in row.iter().enumerate() {
                if x != -rows[j][i] || !x.is_finite() {
                    return Err(domain(format!("entry ({i}, {j}) breaks antisymmetry")));
                }
            }
        }
        for (i, row) in rows.iter().enumerate() {
            a.data[i * a.dim..(i + 1) * a.dim].copy_from_slice(row);
        }
        Ok(a)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.data[i * self.dim + j]
    }

    /// Sets `A[i][j] = x` and `A[j][i] = -x`.
    pub fn set(&mut self, i: usize, j: usize, x: f64) {
        assert!(i != j || x == 0.0, "diagonal of a skew matrix is zero");
        self.data[i * self.dim + j] = x;
        self.data[j * self.dim + i] = -x;
    }

    /// Adds `x` to `A[i][j]` and subtracts it from `A[j][i]`.
    pub fn add(&mut self, i: usize, j: usize, x: f64) {
        let v = self.get(i, j) + x;
        self.set(i, j, v);
    }

    pub fn rows(&self) -> Vec<Vec<f64>> {
        self.data.chunks(self.dim).map(|r| r.to_vec()).collect()
    }

    /// Nonzero entries strictly above the diagonal.
    pub fn upper_nonzeros(&self) -> usize {
        (0..self.dim)
            .map(|i| (i + 1..self.dim).filter(|&j| self.get(i, j) != 0.0).count())
            .sum()
    }

    fn swap(&mut self, a: usize, b: usize) {
        let d = self.dim;
        for j in 0..d {
            self.data.swap(a * d + j, b * d + j);
        }
        for i in 0..d {
            self.data.swap(i * d + a, i * d + b);
        }
    }
}

/// Pfaffian by Parlett-Reid tridiagonalisation with column pivoting.
/// A pivot below `1e-12` times the largest entry makes the result an exact zero.
pub fn pfaffian(a: &SkewMatrix) -> Result<SignedLog> {
    let n = a.dim;
    if n % 2 == 1 {
        return Err(domain(format!("Pfaffian needs an even dimension, got {n}")));
    }
    let scale = a.data.iter().fold(0.0f64, |m, x| m.max(x.abs()));
    if scale == 0.0 {
        return Ok(SignedLog::ZERO);
    }
    let tol = PIVOT_TOLERANCE * scale;
    let mut a = a.clone();
    let mut pf = SignedLog::ONE;
    let mut tau = vec![0.0; n];
    let mut col = vec![0.0; n];
    for k in (0..n - 1).step_by(2) {
        let (kp, pivot) = (k + 1..n)
            .map(|i| (i, a.get(i, k).abs()))
            .fold((k + 1, -1.0), |best, c| if c.1 > best.1 { c } else { best });
        if pivot < tol {
            return Ok(SignedLog::ZERO);
        }
        if kp != k + 1 {
            a.swap(k + 1, kp);
            pf = -pf;
        }
        let akk1 = a.get(k, k + 1);
        pf = pf * SignedLog::from_f64(akk1);
        if k + 2 < n {
            for i in k + 2..n {
                tau[i] = a.get(k, i) / akk1;
                col[i] = a.get(i, k + 1);
            }
            let d = n;
            a.data[(k + 2) * d..]
                .par_chunks_mut(d)
                .enumerate()
                .for_each(|(r, row)| {
                    let i = k + 2 + r;
                    for j in k + 2..d {
                        row[j] += tau[i] * col[j] - col[i] * tau[j];
                    }
                });
        }
    }
    Ok(pf)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum WrapSign {
    Plus,
    Minus,
}

impl WrapSign {
    fn value(self) -> f64 {
        match self {
            WrapSign::Plus => 1.0,
            WrapSign::Minus => -1.0,
        }
    }

    /// The angle grid diagonalising a wrap of this sign.
    pub fn parity(self) -> Parity {
        match self {
            WrapSign::Plus => Parity::Integer,
            WrapSign::Minus => Parity::Half,
        }
    }
}

/// Signs on the horizontal and vertical wrap bonds of a torus matrix.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct TorusVariant {
    pub wrap_h: WrapSign,
    pub wrap_v: WrapSign,
}

impl TorusVariant {
    /// `A1 .. A4` in the order of the combination `1/2(-Pf A1 + Pf A2 + Pf A3 + Pf A4)`.
    pub const ALL: [TorusVariant; 4] = [
        TorusVariant::new(WrapSign::Plus, WrapSign::Plus),
        TorusVariant::new(WrapSign::Plus, WrapSign::Minus),
        TorusVariant::new(WrapSign::Minus, WrapSign::Plus),
        TorusVariant::new(WrapSign::Minus, WrapSign::Minus),
    ];

    pub const fn new(wrap_h: WrapSign, wrap_v: WrapSign) -> Self {
        TorusVariant { wrap_h, wrap_v }
    }
}

/// Oriented dimer adjacency of a square grid.
#[derive(Debug, Clone, PartialEq)]
pub struct KasteleynMatrix {
    pub spec: LatticeSpec,
    pub weights: MatchingWeights,
    pub variant: Option<TorusVariant>,
    pub matrix: SkewMatrix,
}

/// Site `(r, c)` is `r n + c`. Horizontal bonds carry `z1`, vertical bonds `(-1)^c z2`.
/// Row wraps join `(r, n-1)` to `(r, 0)`; column wraps join `(m-1, c)` to `(0, c)`.
/// On cylinders the wrap entries are negated; a row-wrapped cylinder needs even `n`.
pub fn build_dimer_matrix(
    spec: &LatticeSpec,
    w: MatchingWeights,
    variant: Option<TorusVariant>,
) -> Result<KasteleynMatrix> {
    let w = MatchingWeights::new(w.z1, w.z2)?;
    if spec.geometry() != Geometry::Square {
        return Err(domain("dimer matrices are built for the square grid only"));
    }
    let (m, n) = (spec.rows(), spec.cols());
    if m * n % 2 == 1 {
        return Err(domain(format!("{m}x{n} has an odd number of sites")));
    }
    let (sh, sv) = match (spec.boundary(), variant) {
        (Boundary::Free, None) => (0.0, 0.0),
        (Boundary::CylinderH, None) if n % 2 == 0 => (-1.0, 0.0),
        (Boundary::CylinderV, None) => (0.0, -1.0),
        (Boundary::Torus, Some(v)) if n % 2 == 0 => (v.wrap_h.value(), v.wrap_v.value()),
        (b, v) => {
            return Err(domain(format!(
                "no dimer matrix for {m}x{n} with boundary {b:?} and variant {v:?}"
            )))
        }
    };
    let mut a = SkewMatrix::zeros(m * n)?;
    let site = |r: usize, c: usize| r * n + c;
    for r in 0..m {
        for c in 0..n {
            let alt = if c % 2 == 0 { 1.0 } else { -1.0 };
            if c + 1 < n {
                a.add(site(r, c), site(r, c + 1), w.z1);
            } else if sh != 0.0 && n > 1 {
                a.add(site(r, c), site(r, 0), sh * w.z1);
            }
            if r + 1 < m {
                a.add(site(r, c), site(r + 1, c), alt * w.z2);
            } else if sv != 0.0 && m > 1 {
                a.add(site(r, c), site(0, c), sv * alt * w.z2);
            }
        }
    }
    Ok(KasteleynMatrix {
        spec: *spec,
        weights: w,
        variant,
        matrix: a,
    })
}

/// Weighted dimer count of a free, cylinder or torus grid from Pfaffians.
pub fn dimer_count_pfaffian(spec: &LatticeSpec, w: MatchingWeights) -> Result<f64> {
    if spec.boundary() != Boundary::Torus {
        return Ok(pfaffian(&build_dimer_matrix(spec, w, None)?.matrix)?
            .to_f64()
            .abs());
    }
    let pfs = TorusVariant::ALL
        .par_iter()
        .map(|v| Ok(pfaffian(&build_dimer_matrix(spec, w, Some(*v))?.matrix)?.to_f64()))
        .collect::<Result<Vec<f64>>>()?;
    Ok(0.5 * (-pfs[0] + pfs[1] + pfs[2] + pfs[3]))
}

const R: usize = 0;
const L: usize = 1;
const U: usize = 2;
const D: usize = 3;

/// Block matrix of the torus Ising model with `z1 = tanh k_h`, `z2 = tanh k_v`.
/// Block `(r, c)` holds rows `4(r n + c) ..` ordered `R, L, U, D`.
pub fn ising_block_matrix(
    m: usize,
    n: usize,
    k_h: f64,
    k_v: f64,
    v: TorusVariant,
) -> Result<SkewMatrix> {
    check_capacity("block matrix dimension", 4 * m * n, MAX_SKEW_DIM)?;
    let (z1, z2) = (k_h.tanh(), k_v.tanh());
    let mut a = SkewMatrix::zeros(4 * m * n)?;
    for r in 0..m {
        for c in 0..n {
            let b = 4 * (r * n + c);
            a.set(b + R, b + L, 1.0);
            a.set(b + R, b + U, -1.0);
            a.set(b + R, b + D, -1.0);
            a.set(b + L, b + U, 1.0);
            a.set(b + L, b + D, -1.0);
            a.set(b + U, b + D, 1.0);
            let right = 4 * (r * n + (c + 1) % n);
            let sh = if c + 1 == n { v.wrap_h.value() } else { 1.0 };
            a.add(b + R, right + L, sh * z1);
            let down = 4 * (((r + 1) % m) * n + c);
            let sv = if r + 1 == m { v.wrap_v.value() } else { 1.0 };
            a.add(b + U, down + D, sv * z2);
        }
    }
    Ok(a)
}

fn check_torus(m: usize, n: usize, k_h: f64, k_v: f64) -> Result<()> {
    if m < 2 || n < 2 {
        return Err(domain(format!(
            "the block torus needs m, n >= 2, got {m}x{n}"
        )));
    }
    if !(k_h > 0.0 && k_v > 0.0 && k_h.is_finite() && k_v.is_finite()) {
        return Err(domain("the block torus needs positive finite couplings"));
    }
    check_capacity("block matrix dimension", 4 * m * n, MAX_SKEW_DIM)
}

/// Pfaffian of one block matrix, normalised to one at zero coupling.
pub fn ising_pfaffian_variant(
    m: usize,
    n: usize,
    k_h: f64,
    k_v: f64,
    v: TorusVariant,
) -> Result<SignedLog> {
    check_torus(m, n, k_h, k_v)?;
    let mut pf = pfaffian(&ising_block_matrix(m, n, k_h, k_v, v)?)?;
    if m * n % 2 == 1 {
        pf = -pf;
    }
    Ok(pf)
}

/// `ln Z = mn ln(2 cosh k_h cosh k_v) + ln(1/2(-Pf A1 + Pf A2 + Pf A3 + Pf A4))`.
pub fn ising_pfaffian_torus(m: usize, n: usize, k_h: f64, k_v: f64) -> Result<f64> {
    check_torus(m, n, k_h, k_v)?;
    let pfs = TorusVariant::ALL
        .par_iter()
        .map(|v| ising_pfaffian_variant(m, n, k_h, k_v, *v))
        .collect::<Result<Vec<SignedLog>>>()?;
    let total = SignedLog::sum(&[-pfs[0], pfs[1], pfs[2], pfs[3]]);
    if total.sign <= 0.0 {
        return Err(Error::Singular(
            "Pfaffian combination is not positive".into(),
        ));
    }
    let pref = (m * n) as f64 * (ln_2cosh(k_h) + ln_2cosh(k_v) - LN_2);
    Ok(pref - LN_2 + total.ln_abs)
}

fn det4(mut a: [[Complex64; 4]; 4]) -> Complex64 {
    let mut det = Complex64::new(1.0, 0.0);
    for k in 0..4 {
        let p = (k..4)
            .max_by(|&i, &j| a[i][k].norm().total_cmp(&a[j][k].norm()))
            .unwrap_or(k);
        if a[p][k].norm() == 0.0 {
            return Complex64::new(0.0, 0.0);
        }
        if p != k {
            a.swap(p, k);
            det = -det;
        }
        det *= a[k][k];
        let (top, rest) = a.split_at_mut(k + 1);
        let pivot = &top[k];
        for row in rest {
            let f = row[k] / pivot[k];
            for (x, y) in row[k..].iter_mut().zip(&pivot[k..]) {
                *x -= f * y;
            }
        }
    }
    det
}

/// `det A` of one block matrix as a product of `4 x 4` Fourier-block determinants
/// over the wrap-sign angle grids.
pub fn ising_det_fast(
    m: usize,
    n: usize,
    k_h: f64,
    k_v: f64,
    v: TorusVariant,
) -> Result<SignedLog> {
    check_torus(m, n, k_h, k_v)?;
    let (z1, z2) = (k_h.tanh(), k_v.tanh());
    let thetas: Vec<f64> = v.wrap_h.parity().angles(n).collect();
    let phis: Vec<f64> = v.wrap_v.parity().angles(m).collect();
    let mut out = SignedLog::ONE;
    for phi in &phis {
        for theta in &thetas {
            let c = |x: f64| Complex64::new(x, 0.0);
            let mut b = [[c(0.0); 4]; 4];
            let base = [
                (R, L, 1.0),
                (R, U, -1.0),
                (R, D, -1.0),
                (L, U, 1.0),
                (L, D, -1.0),
                (U, D, 1.0),
            ];
            for (i, j, x) in base {
                b[i][j] = c(x);
                b[j][i] = c(-x);
            }
            let eh = Complex64::from_polar(z1, *theta);
            let ev = Complex64::from_polar(z2, *phi);
            b[R][L] += eh;
            b[L][R] -= eh.conj();
            b[U][D] += ev;
            b[D][U] -= ev.conj();
            let d = det4(b);
            if d.re.abs() < 1e-300 {
                return Ok(SignedLog::ZERO);
            }
            out = out * SignedLog::from_f64(d.re);
        }
    }
    Ok(out)
}
