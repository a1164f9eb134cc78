//! One-dimensional chain: transfer matrix, open-chain recursion and the
//! four-component recurrence for the closed chain.

use crate::error::{check_finite, domain, Result};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ChainParams {
    pub n_spins: usize,
    pub k: f64,
    pub h: f64,
    pub closed: bool,
}

impl ChainParams {
    pub fn new(n_spins: usize, k: f64, h: f64, closed: bool) -> Result<Self> {
        if n_spins == 0 {
            return Err(domain("a chain needs at least one spin"));
        }
        check_finite("k", k)?;
        check_finite("h", h)?;
        Ok(ChainParams {
            n_spins,
            k,
            h,
            closed,
        })
    }

    fn require(&self, closed: bool) -> Result<()> {
        if self.closed != closed {
            let want = if closed { "closed" } else { "open" };
            return Err(domain(format!("this method needs a {want} chain")));
        }
        check_finite("k", self.k)?;
        check_finite("h", self.h)
    }
}

/// Iterate of the open-chain recursion.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RecursionState {
    pub alpha: f64,
    pub beta: f64,
}

impl RecursionState {
    pub fn first(omega_j: f64, omega_h: f64) -> Self {
        RecursionState {
            alpha: 1.0,
            beta: omega_j * omega_h,
        }
    }

    pub fn next(self, omega_j: f64, omega_h: f64) -> Self {
        RecursionState {
            alpha: self.alpha + self.beta * omega_h,
            beta: self.beta * omega_j + self.alpha * omega_j * omega_h,
        }
    }
}

/// Eigenvalues of the symmetric 2x2 transfer matrix, largest first.
pub fn transfer_eigenvalues(k: f64, h: f64) -> (f64, f64) {
    let root = (h.sinh().powi(2) + (-4.0 * k).exp()).sqrt();
    let l1 = k.exp() * (h.cosh() + root);
    (l1, 2.0 * (2.0 * k).sinh() / l1)
}

/// `ln(l1^N + l2^N)` for the closed chain.
pub fn transfer_closed(p: &ChainParams) -> Result<f64> {
    p.require(true)?;
    let (l1, l2) = transfer_eigenvalues(p.k, p.h);
    let n = p.n_spins as i32;
    let ratio = (l2 / l1).powi(n);
    Ok(n as f64 * l1.ln() + ratio.ln_1p())
}

/// Open chain by the `(alpha, beta)` recursion, `Z = 2^S cosh^(S-1) k cosh^S h alpha_S`.
pub fn recursive_open(p: &ChainParams) -> Result<f64> {
    p.require(false)?;
    let (wj, wh) = (p.k.tanh(), p.h.tanh());
    let mut state = RecursionState::first(wj, wh);
    let mut ln_scale = 0.0;
    for _ in 1..p.n_spins {
        state = state.next(wj, wh);
        let s = state.alpha.abs().max(state.beta.abs());
        if !(1e-100..=1e100).contains(&s) {
            state.alpha /= s;
            state.beta /= s;
            ln_scale += s.ln();
        }
    }
    let s = p.n_spins as f64;
    Ok(s * std::f64::consts::LN_2
        + (s - 1.0) * ln_cosh(p.k)
        + s * ln_cosh(p.h)
        + state.alpha.ln()
        + ln_scale)
}

fn ln_cosh(x: f64) -> f64 {
    crate::numeric::ln_2cosh(x) - std::f64::consts::LN_2
}

/// Recurrence matrix acting on `(z_uu, z_ud, z_du, z_dd)`, indexed by `(s_1, s_N)`.
pub fn recurrence_matrix(k: f64, h: f64) -> [[f64; 4]; 4] {
    let e = f64::exp;
    [
        [e(k + h), e(k + h), 0.0, 0.0],
        [e(-3.0 * k - h), e(k - h), 0.0, 0.0],
        [0.0, 0.0, e(k + h), e(-3.0 * k + h)],
        [0.0, 0.0, e(k - h), e(k - h)],
    ]
}

/// Closed chain by iterating `z_N = M^(N-1) z_1` and summing the components.
pub fn induction_closed(p: &ChainParams) -> Result<f64> {
    p.require(true)?;
    let m = recurrence_matrix(p.k, p.h);
    let mut z = [(p.k + p.h).exp(), 0.0, 0.0, (p.k - p.h).exp()];
    let mut ln_scale = 0.0;
    for _ in 1..p.n_spins {
        let mut next = [0.0; 4];
        for (out, row) in next.iter_mut().zip(&m) {
            *out = row.iter().zip(&z).map(|(a, b)| a * b).sum();
        }
        let s = next.iter().fold(0.0f64, |a, b| a.max(b.abs()));
        z = next.map(|x| x / s);
        ln_scale += s.ln();
    }
    Ok(z.iter().sum::<f64>().ln() + ln_scale)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{Boundary, Geometry, LatticeSpec, ReducedCouplings};
    use crate::oracle::{build_lattice_graph, enumerate_partition_graph};
    use approx::assert_relative_eq;
    use proptest::prelude::*;

    fn oracle(n: usize, k: f64, h: f64, closed: bool) -> f64 {
        let bc = if closed {
            Boundary::Torus
        } else {
            Boundary::Free
        };
        let spec = LatticeSpec::new(1, n, Geometry::Chain, bc).unwrap();
        let g = build_lattice_graph(&spec, &ReducedCouplings::chain(k, h)).unwrap();
        enumerate_partition_graph(&g, h).unwrap()
    }

    fn closed(n: usize, k: f64, h: f64) -> ChainParams {
        ChainParams::new(n, k, h, true).unwrap()
    }

    fn open(n: usize, k: f64, h: f64) -> ChainParams {
        ChainParams::new(n, k, h, false).unwrap()
    }

    #[test]
    fn transfer_examples() {
        assert_relative_eq!(
            transfer_closed(&closed(3, 0.0, 0.0)).unwrap(),
            8f64.ln(),
            max_relative = 1e-15
        );
        let x = 0.6f64;
        let want = ((2.0 * x.cosh()).powi(4) + (2.0 * x.sinh()).powi(4)).ln();
        assert_relative_eq!(
            transfer_closed(&closed(4, x, 0.0)).unwrap(),
            want,
            max_relative = 1e-14
        );
        assert_relative_eq!(
            transfer_closed(&closed(5, 0.8, 0.3)).unwrap(),
            oracle(5, 0.8, 0.3, true),
            max_relative = 1e-12
        );
    }

    #[test]
    fn recursion_examples() {
        for s in 2..10 {
            let k = 0.45f64;
            let want = s as f64 * 2f64.ln() + (s - 1) as f64 * k.cosh().ln();
            assert_relative_eq!(
                recursive_open(&open(s, k, 0.0)).unwrap(),
                want,
                max_relative = 1e-14
            );
            let h = -0.8f64;
            let want = s as f64 * (2.0 * h.cosh()).ln();
            assert_relative_eq!(
                recursive_open(&open(s, 0.0, h)).unwrap(),
                want,
                max_relative = 1e-14
            );
        }
        assert_relative_eq!(
            recursive_open(&open(6, 0.5, 0.25)).unwrap(),
            oracle(6, 0.5, 0.25, false),
            max_relative = 1e-12
        );
    }

    #[test]
    fn induction_examples() {
        let (k, h) = (0.9f64, -0.4f64);
        let mut z = 0.0;
        for s1 in [1.0, -1.0] {
            for s2 in [1.0, -1.0] {
                z += (2.0 * k * s1 * s2 + h * (s1 + s2)).exp();
            }
        }
        assert_relative_eq!(
            induction_closed(&closed(2, k, h)).unwrap(),
            z.ln(),
            max_relative = 1e-14
        );
        assert_relative_eq!(
            induction_closed(&closed(8, 1.0, 0.0)).unwrap(),
            transfer_closed(&closed(8, 1.0, 0.0)).unwrap(),
            max_relative = 1e-12
        );
        assert_relative_eq!(
            induction_closed(&closed(8, 0.3, 0.7)).unwrap(),
            oracle(8, 0.3, 0.7, true),
            max_relative = 1e-12
        );
    }

    #[test]
    fn long_chains_stay_finite() {
        let z = recursive_open(&open(5000, 2.0, 0.3)).unwrap();
        assert!(z.is_finite());
        let a = induction_closed(&closed(3000, 1.5, 0.2)).unwrap();
        let b = transfer_closed(&closed(3000, 1.5, 0.2)).unwrap();
        assert_relative_eq!(a, b, max_relative = 1e-11);
    }

    #[test]
    fn single_spin_ring() {
        let (k, h) = (0.4f64, 0.3f64);
        let trace = (2.0 * k.exp() * h.cosh()).ln();
        assert_relative_eq!(
            induction_closed(&closed(1, k, h)).unwrap(),
            trace,
            max_relative = 1e-14
        );
        assert_relative_eq!(
            transfer_closed(&closed(1, k, h)).unwrap(),
            trace,
            max_relative = 1e-14
        );
    }

    #[test]
    fn wrong_topology_is_rejected() {
        assert!(transfer_closed(&open(4, 0.1, 0.0)).is_err());
        assert!(recursive_open(&closed(4, 0.1, 0.0)).is_err());
        assert!(induction_closed(&open(4, 0.1, 0.0)).is_err());
        assert!(ChainParams::new(0, 0.1, 0.0, true).is_err());
    }

    proptest! {
        #[test]
        fn even_in_field(n in 2usize..40, k in -1.5f64..1.5, h in 0.0f64..2.0) {
            let a = transfer_closed(&closed(n, k, h)).unwrap();
            let b = transfer_closed(&closed(n, k, -h)).unwrap();
            prop_assert!((a - b).abs() <= 1e-12 * a.abs().max(1.0));
            let a = recursive_open(&open(n, k, h)).unwrap();
            let b = recursive_open(&open(n, k, -h)).unwrap();
            prop_assert!((a - b).abs() <= 1e-12 * a.abs().max(1.0));
        }

        #[test]
        fn induction_equals_transfer(n in 2usize..200, k in 0.0f64..2.0, h in -2.0f64..2.0) {
            let a = induction_closed(&closed(n, k, h)).unwrap();
            let b = transfer_closed(&closed(n, k, h)).unwrap();
            prop_assert!((a - b).abs() <= 1e-11 * a.abs());
        }
    }
}
