//! Row-to-row transfer matrix of the square-lattice torus.

use rayon::prelude::*;

use crate::error::{check_capacity, check_finite, domain, Result};

pub const MAX_TRANSFER_COLS: usize = 14;

/// Dense `2^n x 2^n` transfer matrix. Spin `nu` (1-based) occupies bit `n - nu`
/// of the basis index; a clear bit means spin up.
#[derive(Debug, Clone, PartialEq)]
pub struct TransferOperator {
    n_cols: usize,
    k_row: f64,
    k_col: f64,
    entries: Vec<f64>,
}

impl TransferOperator {
    pub fn dim(&self) -> usize {
        1 << self.n_cols
    }

    pub fn n_cols(&self) -> usize {
        self.n_cols
    }

    /// `(k_a, k_b)`: the inter-row and intra-row couplings.
    pub fn couplings(&self) -> (f64, f64) {
        (self.k_row, self.k_col)
    }

    pub fn entry(&self, i: usize, j: usize) -> f64 {
        self.entries[i * self.dim() + j]
    }

    pub fn entries(&self) -> &[f64] {
        &self.entries
    }
}

/// Spin `nu` in `1..=n` of basis state `i`.
pub fn spin(i: usize, nu: usize, n: usize) -> f64 {
    if i >> (n - nu) & 1 == 1 {
        -1.0
    } else {
        1.0
    }
}

/// `T_ij = prod_nu exp(k_a s_nu(i) s_nu(j)) * exp(k_b sum_nu s_nu(j) s_nu+1(j))`, cyclic in `nu`.
pub fn build_transfer(n: usize, k_a: f64, k_b: f64) -> Result<TransferOperator> {
    if n == 0 {
        return Err(domain("a transfer matrix needs at least one column"));
    }
    check_capacity("transfer columns", n, MAX_TRANSFER_COLS)?;
    check_finite("k_a", k_a)?;
    check_finite("k_b", k_b)?;
    let dim = 1usize << n;
    let row_energy: Vec<f64> = (0..dim)
        .map(|j| {
            (1..=n)
                .map(|nu| spin(j, nu, n) * spin(j, nu % n + 1, n))
                .sum()
        })
        .collect();
    let mut entries = vec![0.0; dim * dim];
    entries
        .par_chunks_mut(dim)
        .enumerate()
        .for_each(|(i, row)| {
            for (j, t) in row.iter_mut().enumerate() {
                let agree = n as f64 - 2.0 * (i ^ j).count_ones() as f64;
                *t = (k_a * agree + k_b * row_energy[j]).exp();
            }
        });
    Ok(TransferOperator {
        n_cols: n,
        k_row: k_a,
        k_col: k_b,
        entries,
    })
}

/// Square matrix scaled so its largest entry is one; the log of the scale is kept.
#[derive(Clone)]
struct Scaled {
    dim: usize,
    a: Vec<f64>,
    ln_scale: f64,
}

impl Scaled {
    fn normalized(dim: usize, mut a: Vec<f64>, ln_scale: f64) -> Self {
        let max = a.iter().fold(0.0f64, |m, x| m.max(x.abs()));
        if max > 0.0 {
            a.iter_mut().for_each(|x| *x /= max);
        }
        Scaled {
            dim,
            a,
            ln_scale: ln_scale + max.ln(),
        }
    }

    fn mul(&self, other: &Scaled) -> Scaled {
        let d = self.dim;
        let mut out = vec![0.0; d * d];
        out.par_chunks_mut(d).enumerate().for_each(|(i, row)| {
            for k in 0..d {
                let aik = self.a[i * d + k];
                let bk = &other.a[k * d..(k + 1) * d];
                for (r, b) in row.iter_mut().zip(bk) {
                    *r += aik * b;
                }
            }
        });
        Scaled::normalized(d, out, self.ln_scale + other.ln_scale)
    }

    fn pow(&self, mut e: usize) -> Scaled {
        let d = self.dim;
        let mut id = vec![0.0; d * d];
        for i in 0..d {
            id[i * d + i] = 1.0;
        }
        let mut result = Scaled {
            dim: d,
            a: id,
            ln_scale: 0.0,
        };
        let mut base = self.clone();
        while e > 0 {
            if e & 1 == 1 {
                result = result.mul(&base);
            }
            e >>= 1;
            if e > 0 {
                base = base.mul(&base);
            }
        }
        result
    }
}

/// `ln Tr(T^m)`, as `sum_ij A_ij B_ji` with `A = T^(m/2)` and `B = T^(m - m/2)`.
pub fn partition_torus_transfer(m: usize, t: &TransferOperator) -> Result<f64> {
    if m == 0 {
        return Err(domain("a torus needs at least one row"));
    }
    let d = t.dim();
    let base = Scaled::normalized(d, t.entries.clone(), 0.0);
    let a = base.pow(m / 2);
    let b = if m.is_multiple_of(2) {
        a.clone()
    } else {
        a.mul(&base)
    };
    let tr: f64 = (0..d)
        .map(|i| (0..d).map(|j| a.a[i * d + j] * b.a[j * d + i]).sum::<f64>())
        .sum();
    Ok(tr.ln() + a.ln_scale + b.ln_scale)
}

/// `ln Z` of the `m x n` square torus with `k_h` along rows and `k_v` between rows.
/// The shorter side is used as the row length.
pub fn torus_log_z(m: usize, n: usize, k_h: f64, k_v: f64) -> Result<f64> {
    let (rows, cols, k_a, k_b) = if n <= m {
        (m, n, k_v, k_h)
    } else {
        (n, m, k_h, k_v)
    };
    partition_torus_transfer(rows, &build_transfer(cols, k_a, k_b)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{LatticeSpec, ReducedCouplings, K_C};
    use crate::oracle::{build_lattice_graph, enumerate_partition_graph};
    use approx::assert_relative_eq;

    fn oracle(m: usize, n: usize, kh: f64, kv: f64) -> f64 {
        let spec = LatticeSpec::square_torus(m, n).unwrap();
        let g = build_lattice_graph(&spec, &ReducedCouplings::square(kh, kv)).unwrap();
        enumerate_partition_graph(&g, 0.0).unwrap()
    }

    #[test]
    fn single_column() {
        let (ka, kb) = (0.3f64, 0.7f64);
        let t = build_transfer(1, ka, kb).unwrap();
        assert_relative_eq!(t.entry(0, 0), (ka + kb).exp(), max_relative = 1e-15);
        assert_relative_eq!(t.entry(0, 1), (-ka + kb).exp(), max_relative = 1e-15);
        assert_relative_eq!(t.entry(1, 0), (-ka + kb).exp(), max_relative = 1e-15);
        assert_relative_eq!(t.entry(1, 1), (ka + kb).exp(), max_relative = 1e-15);
    }

    #[test]
    fn zero_coupling_is_all_ones() {
        let t = build_transfer(4, 0.0, 0.0).unwrap();
        assert!(t.entries().iter().all(|&x| x == 1.0));
        assert_relative_eq!(
            partition_torus_transfer(3, &t).unwrap(),
            12.0 * 2f64.ln(),
            max_relative = 1e-14
        );
    }

    #[test]
    fn flip_symmetry_and_positivity() {
        let n = 3;
        let t = build_transfer(n, 0.4, -0.2).unwrap();
        let flip = (1 << n) - 1;
        for i in 0..8 {
            assert!((0..8).map(|j| t.entry(i, j)).sum::<f64>() > 0.0);
            for j in 0..8 {
                assert!(t.entry(i, j) > 0.0);
                assert_relative_eq!(
                    t.entry(i, j),
                    t.entry(i ^ flip, j ^ flip),
                    max_relative = 1e-15
                );
            }
        }
    }

    #[test]
    fn basis_order() {
        // index 0b100 for n = 3: spin 1 is down, spins 2 and 3 up
        assert_eq!(spin(0b100, 1, 3), -1.0);
        assert_eq!(spin(0b100, 2, 3), 1.0);
        assert_eq!(spin(0b100, 3, 3), 1.0);
    }

    #[test]
    fn matches_oracle() {
        let t = build_transfer(2, 0.4, 0.4).unwrap();
        assert_relative_eq!(
            partition_torus_transfer(1, &t).unwrap(),
            oracle(1, 2, 0.4, 0.4),
            max_relative = 1e-12
        );
        let t = build_transfer(3, 0.44, 0.44).unwrap();
        assert_relative_eq!(
            partition_torus_transfer(3, &t).unwrap(),
            oracle(3, 3, 0.44, 0.44),
            max_relative = 1e-10
        );
        for (m, n) in [(2, 3), (3, 2), (4, 5), (2, 2), (1, 4), (5, 1)] {
            for (kh, kv) in [(0.2, 0.9), (K_C, K_C), (0.8, 0.3)] {
                assert_relative_eq!(
                    torus_log_z(m, n, kh, kv).unwrap(),
                    oracle(m, n, kh, kv),
                    max_relative = 1e-10
                );
            }
        }
    }

    #[test]
    fn orientation_symmetry() {
        let a = partition_torus_transfer(5, &build_transfer(3, 0.3, 0.7).unwrap()).unwrap();
        let b = partition_torus_transfer(3, &build_transfer(5, 0.7, 0.3).unwrap()).unwrap();
        assert_relative_eq!(a, b, max_relative = 1e-10);
    }

    #[test]
    fn long_torus_does_not_overflow() {
        let t = build_transfer(4, 1.5, 1.5).unwrap();
        let z = partition_torus_transfer(2000, &t).unwrap();
        assert!(z.is_finite());
        // dominated by the two ground states
        assert_relative_eq!(z, 2f64.ln() + 2000.0 * 4.0 * 3.0, max_relative = 1e-5);
    }

    #[test]
    fn capacity() {
        assert!(matches!(
            build_transfer(15, 0.1, 0.1),
            Err(crate::Error::Capacity { .. })
        ));
    }
}
