//! Free energies per site in the thermodynamic limit by periodic quadrature,
//! the square-lattice critical point and finite-difference observables.

use std::f64::consts::{LN_2, PI};

use rayon::prelude::*;

use crate::error::{check_finite, domain, Result};
use crate::spectral::TriangularKernel;

pub const MIN_POINTS: usize = 16;
pub const DEFAULT_POINTS: usize = 512;
pub const DEFAULT_DK: f64 = 1e-4;

/// Midpoint tensor grid on `[0, 2 pi)^2`, nodes at `2 pi (j + 1/2) / N`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct QuadratureSpec {
    points_per_axis: usize,
    refinement: Option<u32>,
}

impl Default for QuadratureSpec {
    fn default() -> Self {
        QuadratureSpec {
            points_per_axis: DEFAULT_POINTS,
            refinement: None,
        }
    }
}

impl QuadratureSpec {
    pub fn new(points_per_axis: usize) -> Result<Self> {
        if points_per_axis < MIN_POINTS {
            return Err(domain(format!(
                "quadrature needs at least {MIN_POINTS} points per axis, got {points_per_axis}"
            )));
        }
        Ok(QuadratureSpec {
            points_per_axis,
            refinement: None,
        })
    }

    /// Number of grid doublings used by [`convergence_gap`].
    pub fn with_refinement(mut self, doublings: u32) -> Self {
        self.refinement = Some(doublings);
        self
    }

    pub fn points_per_axis(&self) -> usize {
        self.points_per_axis
    }

    pub fn refinement(&self) -> Option<u32> {
        self.refinement
    }

    pub fn doubled(&self) -> Self {
        QuadratureSpec {
            points_per_axis: 2 * self.points_per_axis,
            refinement: self.refinement,
        }
    }

    /// Mean of `f(cos w1, sin w1, cos w2, sin w2)` over the grid.
    pub fn mean<F>(&self, f: F) -> f64
    where
        F: Fn(f64, f64, f64, f64) -> f64 + Sync,
    {
        let n = self.points_per_axis;
        let nodes: Vec<(f64, f64)> = (0..n)
            .map(|j| {
                let (s, c) = (2.0 * PI * (j as f64 + 0.5) / n as f64).sin_cos();
                (c, s)
            })
            .collect();
        let rows: Vec<f64> = nodes
            .par_iter()
            .map(|&(c1, s1)| nodes.iter().map(|&(c2, s2)| f(c1, s1, c2, s2)).sum())
            .collect();
        rows.iter().sum::<f64>() / (n * n) as f64
    }
}

/// Largest change of `f` over the configured number of grid doublings (one if unset).
pub fn convergence_gap<F>(q: &QuadratureSpec, f: F) -> Result<f64>
where
    F: Fn(&QuadratureSpec) -> Result<f64>,
{
    let mut spec = *q;
    let mut prev = f(&spec)?;
    let mut gap = 0.0f64;
    for _ in 0..q.refinement.unwrap_or(1).max(1) {
        spec = spec.doubled();
        let next = f(&spec)?;
        gap = gap.max((next - prev).abs());
        prev = next;
    }
    Ok(gap)
}

fn positive(name: &str, k: f64) -> Result<()> {
    check_finite(name, k)?;
    if k > 0.0 {
        Ok(())
    } else {
        Err(domain(format!("{name} must be positive, got {k}")))
    }
}

/// `ln 2 + 1/2 <ln(cosh 2K1 cosh 2K2 - sinh 2K1 cos w1 - sinh 2K2 cos w2)>`.
pub fn onsager_free_energy(k1: f64, k2: f64, q: &QuadratureSpec) -> Result<f64> {
    positive("k1", k1)?;
    positive("k2", k2)?;
    let (c1, s1) = ((2.0 * k1).cosh(), (2.0 * k1).sinh());
    let (c2, s2) = ((2.0 * k2).cosh(), (2.0 * k2).sinh());
    let c = c1 * c2;
    Ok(LN_2 + 0.5 * q.mean(|a, _, b, _| (c - s1 * a - s2 * b).ln()))
}

/// `ln(2 cosh^2 k) + 1/2 <ln((1+z^2)^2 + 2z(1-z^2)(cos p + cos q))>`, `z = tanh k`.
pub fn fermionic_free_energy(k: f64, q: &QuadratureSpec) -> Result<f64> {
    positive("k", k)?;
    let z = k.tanh();
    let a = (1.0 + z * z).powi(2);
    let b = 2.0 * z * (1.0 - z * z);
    let pref = LN_2 + 2.0 * (crate::numeric::ln_2cosh(k) - LN_2);
    Ok(pref + 0.5 * q.mean(|p, _, r, _| (a + b * (p + r)).ln()))
}

/// `ln 2 - ln(1 - x^2) + 1/(8 pi^2) int ln((1+x^2)^2 - 2x(1-x^2)(cos p + cos q))`, `x = tanh theta`.
pub fn dirac_free_energy(theta: f64, q: &QuadratureSpec) -> Result<f64> {
    positive("theta", theta)?;
    let x = theta.tanh();
    let a = (1.0 + x * x).powi(2);
    let b = 2.0 * x * (1.0 - x * x);
    Ok(LN_2 - (-x * x).ln_1p() + 0.5 * q.mean(|p, _, r, _| (a - b * (p + r)).ln()))
}

/// `ln 2 + 1/2 <ln(c1 c2 c3 + s1 s2 s3 - s1 cos w1 - s2 cos w2 - s3 cos(w1 + w2))>`.
pub fn triangular_free_energy(k1: f64, k2: f64, k3: f64, q: &QuadratureSpec) -> Result<f64> {
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
    Ok(LN_2 + 0.5 * q.mean(|c1, s1, c2, s2| kernel.eval(c1, s1, c2, s2).ln()))
}

/// Root of `sinh 2K = 1` by bisection.
pub fn critical_point_square() -> f64 {
    let (mut lo, mut hi) = (0.1f64, 1.0f64);
    while hi - lo > 1e-15 {
        let mid = 0.5 * (lo + hi);
        if (2.0 * mid).sinh() > 1.0 {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    0.5 * (lo + hi)
}

fn check_step(k: f64, dk: f64) -> Result<()> {
    check_finite("dk", dk)?;
    if !(dk > 0.0 && k - dk > 0.0) {
        return Err(domain(format!("need 0 < dk < k, got k = {k}, dk = {dk}")));
    }
    Ok(())
}

/// `u = -d(-beta f)/dK` on the isotropic square lattice, in units of `J`.
pub fn internal_energy(k: f64, dk: f64, q: &QuadratureSpec) -> Result<f64> {
    check_step(k, dk)?;
    let f = |x: f64| onsager_free_energy(x, x, q);
    Ok(-(f(k + dk)? - f(k - dk)?) / (2.0 * dk))
}

/// `c / k_B = K^2 d^2(-beta f)/dK^2` on the isotropic square lattice.
pub fn specific_heat(k: f64, dk: f64, q: &QuadratureSpec) -> Result<f64> {
    check_step(k, dk)?;
    let f = |x: f64| onsager_free_energy(x, x, q);
    Ok(k * k * (f(k + dk)? - 2.0 * f(k)? + f(k - dk)?) / (dk * dk))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{dual_coupling, K_C};
    use crate::spectral::{kaufman_partition, triangular_log_z_per_site};
    use approx::assert_relative_eq;
    use proptest::prelude::*;

    /// Inner integral done exactly: `<ln(a - b cos q)> = ln((a + sqrt(a^2 - b^2)) / 2)`.
    fn onsager_reduced(k1: f64, k2: f64, n: usize) -> f64 {
        let (c1, s1) = ((2.0 * k1).cosh(), (2.0 * k1).sinh());
        let (c2, s2) = ((2.0 * k2).cosh(), (2.0 * k2).sinh());
        let mean: f64 = (0..n)
            .map(|j| {
                let a = c1 * c2 - s1 * (2.0 * PI * (j as f64 + 0.5) / n as f64).cos();
                ((a + (a * a - s2 * s2).sqrt()) / 2.0).ln()
            })
            .sum::<f64>()
            / n as f64;
        LN_2 + 0.5 * mean
    }

    fn q(n: usize) -> QuadratureSpec {
        QuadratureSpec::new(n).unwrap()
    }

    #[test]
    fn minimum_points() {
        assert!(QuadratureSpec::new(8).is_err());
        assert_eq!(QuadratureSpec::default().points_per_axis(), DEFAULT_POINTS);
    }

    #[test]
    fn weak_coupling_limit() {
        let f = onsager_free_energy(1e-9, 1e-9, &q(64)).unwrap();
        assert!((f - LN_2).abs() < 1e-6);
        assert!((fermionic_free_energy(1e-9, &q(64)).unwrap() - LN_2).abs() < 1e-6);
        assert!((dirac_free_energy(1e-9, &q(64)).unwrap() - LN_2).abs() < 1e-6);
        assert!((triangular_free_energy(1e-9, 1e-9, 1e-9, &q(64)).unwrap() - LN_2).abs() < 1e-6);
        assert_eq!(triangular_free_energy(0.0, 0.0, 0.0, &q(64)).unwrap(), LN_2);
    }

    #[test]
    fn symmetric_in_couplings() {
        let a = onsager_free_energy(0.3, 0.7, &q(128)).unwrap();
        let b = onsager_free_energy(0.7, 0.3, &q(128)).unwrap();
        assert!((a - b).abs() < 1e-14);
    }

    #[test]
    fn matches_reduced_integral() {
        for (k1, k2) in [(0.2, 0.2), (0.3, 0.7), (0.9, 0.9), (1.5, 0.1)] {
            assert_relative_eq!(
                onsager_free_energy(k1, k2, &q(256)).unwrap(),
                onsager_reduced(k1, k2, 4096),
                max_relative = 1e-10
            );
        }
    }

    #[test]
    fn three_isotropic_forms_agree() {
        let spec = QuadratureSpec::default();
        for k in [0.2, 0.3, 0.5, 0.6, 0.9, K_C] {
            let o = onsager_free_energy(k, k, &spec).unwrap();
            assert_relative_eq!(
                fermionic_free_energy(k, &spec).unwrap(),
                o,
                max_relative = 1e-8
            );
            assert_relative_eq!(dirac_free_energy(k, &spec).unwrap(), o, max_relative = 1e-8);
        }
    }

    #[test]
    fn critical_point() {
        let kc = critical_point_square();
        assert!((kc - 0.440_686_793_5).abs() < 5e-11);
        assert!((kc - K_C).abs() < 1e-14);
        assert!((kc.tanh() - (2f64.sqrt() - 1.0)).abs() < 1e-14);
        assert!((dual_coupling(kc).unwrap() - kc).abs() < 1e-14);
    }

    #[test]
    fn critical_point_from_free_energy_forms() {
        let x = K_C.tanh();
        assert!((x - (2f64.sqrt() - 1.0)).abs() < 1e-12);
    }

    #[test]
    fn triangular_reduces_to_square() {
        let spec = q(256);
        assert_relative_eq!(
            triangular_free_energy(0.4, 0.4, 0.0, &spec).unwrap(),
            onsager_free_energy(0.4, 0.4, &spec).unwrap(),
            max_relative = 1e-8
        );
    }

    #[test]
    fn triangular_finite_sum_converges_to_integral() {
        let finite = triangular_log_z_per_site(256, 256, 0.2, 0.3, 0.25).unwrap();
        let integral = triangular_free_energy(0.2, 0.3, 0.25, &QuadratureSpec::default()).unwrap();
        assert!((finite - integral).abs() < 1e-6);
        let finite = triangular_log_z_per_site(64, 64, 0.2, 0.3, 0.25).unwrap();
        assert!((finite - integral).abs() < 1e-6);
    }

    #[test]
    fn finite_tori_approach_the_limit() {
        let f = onsager_free_energy(K_C, K_C, &q(2048)).unwrap();
        let z = kaufman_partition(128, 128, K_C, K_C).unwrap() / (128.0 * 128.0);
        assert!((z - f).abs() < 2e-4);
        for k in [0.3, 0.6] {
            let f = onsager_free_energy(k, k, &QuadratureSpec::default()).unwrap();
            let gaps: Vec<f64> = [8, 16, 32, 64, 128]
                .iter()
                .map(|&m| (kaufman_partition(m, m, k, k).unwrap() / (m * m) as f64 - f).abs())
                .collect();
            assert!(gaps.windows(2).all(|w| w[1] <= w[0]), "{gaps:?}");
            assert!(gaps[4] < 1e-4);
        }
    }

    #[test]
    fn self_convergence_away_from_criticality() {
        for k in [0.2, 0.3, 0.6, 0.9] {
            let gap = convergence_gap(&QuadratureSpec::default(), |s| onsager_free_energy(k, k, s))
                .unwrap();
            assert!(gap < 1e-9, "k = {k}: {gap}");
        }
    }

    #[test]
    fn energy_is_continuous_at_criticality() {
        let spec = q(2048);
        let below = internal_energy(K_C - 1e-3, DEFAULT_DK, &spec).unwrap();
        let above = internal_energy(K_C + 1e-3, DEFAULT_DK, &spec).unwrap();
        assert!((below - above).abs() < 5e-2);
        // the critical energy is -sqrt 2
        let at = internal_energy(K_C, DEFAULT_DK, &spec).unwrap();
        assert!((at + 2f64.sqrt()).abs() < 1e-3);
    }

    #[test]
    fn specific_heat_grows_logarithmically() {
        let spec = q(4096);
        let c = |d: f64| specific_heat(K_C + d, 1e-4, &spec).unwrap();
        let (c2, c3) = (c(1e-2), c(1e-3));
        let slope = (c3 - c2) / (1e3f64.ln() - 1e2f64.ln());
        assert!(slope > 0.0);
        // the amplitude of the divergence is 8 K_c^2 / pi
        assert!((slope - 8.0 * K_C * K_C / PI).abs() < 0.2 * slope);
    }

    #[test]
    fn convex_in_coupling() {
        let spec = q(128);
        let ks: Vec<f64> = (0..=90).map(|i| 0.1 + 0.01 * i as f64).collect();
        let f: Vec<f64> = ks
            .iter()
            .map(|&k| onsager_free_energy(k, k, &spec).unwrap())
            .collect();
        for w in f.windows(3) {
            assert!(w[0] - 2.0 * w[1] + w[2] >= -1e-8);
        }
    }

    #[test]
    fn rejects_bad_input() {
        assert!(onsager_free_energy(0.0, 0.3, &q(16)).is_err());
        assert!(dirac_free_energy(-0.1, &q(16)).is_err());
        assert!(internal_energy(0.1, 0.2, &q(16)).is_err());
        assert!(triangular_free_energy(-0.1, 0.2, 0.2, &q(16)).is_err());
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(16))]

        #[test]
        fn fermionic_equals_onsager(k in 0.05f64..1.5) {
            let spec = q(64);
            let a = onsager_free_energy(k, k, &spec).unwrap();
            prop_assert!((fermionic_free_energy(k, &spec).unwrap() - a).abs() < 1e-12);
            prop_assert!((dirac_free_energy(k, &spec).unwrap() - a).abs() < 1e-12);
        }
    }
}
