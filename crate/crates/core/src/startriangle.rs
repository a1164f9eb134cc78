//! Star-triangle transform between honeycomb and triangular couplings,
//! complete elliptic integrals and the nearest-neighbour correlation `f(K, k)`.

use std::f64::consts::{FRAC_2_PI, FRAC_PI_2, PI};

use crate::error::{check_finite, domain, Error, Result};

const INVARIANT_TOLERANCE: f64 = 1e-10;

/// Honeycomb couplings `L`, the triangular couplings `K` they decimate to,
/// the scale `R` and the modulus `k`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StarTriangleMap {
    pub l: [f64; 3],
    pub k: [f64; 3],
    pub r: f64,
    pub k_modulus: f64,
}

impl StarTriangleMap {
    /// Largest relative violation of the defining identities.
    pub fn residual(&self) -> f64 {
        let [l1, l2, l3] = self.l;
        let c = (l1 + l2 + l3).cosh();
        let ci = [
            (-l1 + l2 + l3).cosh(),
            (l1 - l2 + l3).cosh(),
            (l1 + l2 - l3).cosh(),
        ];
        let rel = |a: f64, b: f64| ((a - b) / b).abs();
        let mut worst = 0.0f64;
        for (i, c_i) in ci.iter().enumerate() {
            let (j, k) = ((i + 1) % 3, (i + 2) % 3);
            // exp(2K_j + 2K_k) = c / c_i
            worst = worst.max(rel((2.0 * (self.k[j] + self.k[k])).exp(), c / c_i));
            let prod = (2.0 * self.k[i]).sinh() * (2.0 * self.l[i]).sinh();
            worst = worst.max(rel(prod * self.k_modulus, 1.0));
        }
        let sinh_l: f64 = self.l.iter().map(|l| (2.0 * l).sinh()).product();
        worst = worst.max(rel(self.r * self.r, 2.0 * self.k_modulus * sinh_l));
        worst.max(rel(self.r * self.k.iter().sum::<f64>().exp(), 2.0 * c))
    }
}

/// Decimates the centre spin of a star with couplings `L1, L2, L3`:
/// `2 cosh(L1 s_i + L2 s_j + L3 s_k) = R exp(K1 s_k s_j + K2 s_k s_i + K3 s_i s_j)`.
pub fn star_to_triangle(l1: f64, l2: f64, l3: f64) -> Result<StarTriangleMap> {
    for (name, l) in [("L1", l1), ("L2", l2), ("L3", l3)] {
        check_finite(name, l)?;
        if l <= 0.0 {
            return Err(domain(format!("{name} must be positive, got {l}")));
        }
    }
    let c = (l1 + l2 + l3).cosh();
    let c1 = (-l1 + l2 + l3).cosh();
    let c2 = (l1 - l2 + l3).cosh();
    let c3 = (l1 + l2 - l3).cosh();
    let k1 = 0.25 * (c * c1 / (c2 * c3)).ln();
    let k2 = 0.25 * (c * c2 / (c1 * c3)).ln();
    let k3 = 0.25 * (c * c3 / (c1 * c2)).ln();
    let k = modulus_k(k1, k2, k3)?;
    let sinh_l = (2.0 * l1).sinh() * (2.0 * l2).sinh() * (2.0 * l3).sinh();
    let map = StarTriangleMap {
        l: [l1, l2, l3],
        k: [k1, k2, k3],
        r: (2.0 * k * sinh_l).sqrt(),
        k_modulus: k,
    };
    let res = map.residual();
    if res.is_nan() || res > INVARIANT_TOLERANCE {
        return Err(Error::Singular(format!(
            "star-triangle identities violated by {res:e}"
        )));
    }
    Ok(map)
}

/// Inverse transform by Newton iteration on [`star_to_triangle`].
pub fn triangle_to_star(k1: f64, k2: f64, k3: f64) -> Result<StarTriangleMap> {
    let target = [k1, k2, k3];
    for (i, k) in target.iter().enumerate() {
        check_finite("K", *k)?;
        if *k <= 0.0 {
            return Err(domain(format!("K{} must be positive, got {k}", i + 1)));
        }
    }
    let forward = |l: [f64; 3]| -> Result<[f64; 3]> {
        let c = (l[0] + l[1] + l[2]).cosh();
        let ci = [
            (-l[0] + l[1] + l[2]).cosh(),
            (l[0] - l[1] + l[2]).cosh(),
            (l[0] + l[1] - l[2]).cosh(),
        ];
        let mut out = [0.0; 3];
        for i in 0..3 {
            let (j, k) = ((i + 1) % 3, (i + 2) % 3);
            out[i] = 0.25 * (c * ci[i] / (ci[j] * ci[k])).ln() - target[i];
        }
        Ok(out)
    };
    let mut l = target.map(|k| crate::model::dual_coupling(k).unwrap_or(1.0).max(0.1));
    for _ in 0..100 {
        let f = forward(l)?;
        if f.iter().all(|x| x.abs() < 1e-15) {
            break;
        }
        let mut jac = [[0.0; 3]; 3];
        for j in 0..3 {
            let h = 1e-7 * l[j].max(1e-3);
            let mut lp = l;
            let mut lm = l;
            lp[j] += h;
            lm[j] -= h;
            let (fp, fm) = (forward(lp)?, forward(lm)?);
            for i in 0..3 {
                jac[i][j] = (fp[i] - fm[i]) / (2.0 * h);
            }
        }
        let step = solve3(jac, f)
            .ok_or_else(|| Error::Singular("inverse star-triangle Jacobian".into()))?;
        let mut t = 1.0;
        while (0..3).any(|i| l[i] - t * step[i] <= 0.0) {
            t *= 0.5;
        }
        for i in 0..3 {
            l[i] -= t * step[i];
        }
    }
    let map = star_to_triangle(l[0], l[1], l[2])?;
    let miss = (0..3)
        .map(|i| (map.k[i] - target[i]).abs())
        .fold(0.0, f64::max);
    if miss > 1e-12 * target.iter().cloned().fold(1.0, f64::max) {
        return Err(Error::Singular(format!(
            "no star couplings found, residual {miss:e}"
        )));
    }
    Ok(map)
}

fn solve3(mut a: [[f64; 3]; 3], mut b: [f64; 3]) -> Option<[f64; 3]> {
    for k in 0..3 {
        let p = (k..3).max_by(|&i, &j| a[i][k].abs().total_cmp(&a[j][k].abs()))?;
        if a[p][k] == 0.0 {
            return None;
        }
        a.swap(p, k);
        b.swap(p, k);
        let (top, rest) = a.split_at_mut(k + 1);
        let pivot = &top[k];
        for (i, row) in rest.iter_mut().enumerate() {
            let f = row[k] / pivot[k];
            for (x, y) in row[k..].iter_mut().zip(&pivot[k..]) {
                *x -= f * y;
            }
            b[k + 1 + i] -= f * b[k];
        }
    }
    let mut x = [0.0; 3];
    for k in (0..3).rev() {
        x[k] = (b[k] - (k + 1..3).map(|j| a[k][j] * x[j]).sum::<f64>()) / a[k][k];
    }
    Some(x)
}

/// `k = (1-v1^2)(1-v2^2)(1-v3^2) / (4 sqrt((1+v1 v2 v3)(v1+v2 v3)(v2+v1 v3)(v3+v1 v2)))`, `v = tanh K`.
pub fn modulus_k(k1: f64, k2: f64, k3: f64) -> Result<f64> {
    for (name, k) in [("K1", k1), ("K2", k2), ("K3", k3)] {
        check_finite(name, k)?;
        if k < 0.0 {
            return Err(domain(format!("{name} must be non-negative, got {k}")));
        }
    }
    let [v1, v2, v3] = [k1, k2, k3].map(f64::tanh);
    let den = (1.0 + v1 * v2 * v3) * (v1 + v2 * v3) * (v2 + v1 * v3) * (v3 + v1 * v2);
    if den <= 0.0 {
        return Err(Error::Singular(
            "modulus is undefined when two couplings vanish".into(),
        ));
    }
    Ok((1.0 - v1 * v1) * (1.0 - v2 * v2) * (1.0 - v3 * v3) / (4.0 * den.sqrt()))
}

/// Complete elliptic integrals of the first and second kind.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EllipticPair {
    pub k: f64,
    pub k_val: f64,
    pub e_val: f64,
}

/// `K(k)` and `E(k)` by the arithmetic-geometric mean, given `k` and `k' = sqrt(1 - k^2)`.
fn agm_elliptic(k: f64, kp: f64) -> EllipticPair {
    let (mut a, mut b) = (1.0f64, kp);
    let mut c = k;
    let mut sum = 0.5 * c * c;
    let mut pow = 0.5;
    for _ in 0..64 {
        if c.abs() <= 1e-17 * a {
            break;
        }
        c = 0.5 * (a - b);
        let an = 0.5 * (a + b);
        b = (a * b).sqrt();
        a = an;
        pow *= 2.0;
        sum += pow * c * c;
    }
    let kk = FRAC_PI_2 / a;
    EllipticPair {
        k,
        k_val: kk,
        e_val: kk * (1.0 - sum),
    }
}

pub fn complete_elliptic(k: f64) -> Result<EllipticPair> {
    check_finite("k", k)?;
    if !(0.0..1.0).contains(&k) {
        return Err(domain(format!(
            "complete elliptic integrals need 0 <= k < 1, got {k}"
        )));
    }
    Ok(agm_elliptic(k, ((1.0 - k) * (1.0 + k)).sqrt()))
}

/// `(K, E)` at the complementary modulus of `k`.
pub fn complete_elliptic_complement(k: f64) -> Result<EllipticPair> {
    let p = complete_elliptic(k)?;
    let kp = ((1.0 - k) * (1.0 + k)).sqrt();
    Ok(agm_elliptic(kp, p.k).with_modulus(kp))
}

impl EllipticPair {
    fn with_modulus(mut self, k: f64) -> Self {
        self.k = k;
        self
    }
}

fn check_modulus(k: f64) -> Result<()> {
    check_finite("k", k)?;
    if k <= 0.0 {
        return Err(domain(format!("modulus must be positive, got {k}")));
    }
    if k == 1.0 {
        return Err(Error::Singular(
            "modulus k = 1 is the critical point".into(),
        ));
    }
    Ok(())
}

/// Coefficients `(a(k), b(k))` of `f = a A - b B`.
pub fn coefficients(k: f64) -> Result<(f64, f64)> {
    check_modulus(k)?;
    if k < 1.0 {
        let p = complete_elliptic(k)?;
        Ok((FRAC_2_PI * p.e_val, FRAC_2_PI * (1.0 - k * k) * p.k_val))
    } else {
        let l = 1.0 / k;
        let p = complete_elliptic(l)?;
        let lp2 = (1.0 - l) * (1.0 + l);
        Ok((
            FRAC_2_PI * (p.e_val - lp2 * p.k_val) / l,
            -FRAC_2_PI * lp2 * p.k_val / l,
        ))
    }
}

/// The same coefficients through the Landen modulus `k1 = 2 sqrt(k) / (1 + k)`, valid on both branches.
pub fn coefficients_landen(k: f64) -> Result<(f64, f64)> {
    check_modulus(k)?;
    let k1 = 2.0 * k.sqrt() / (1.0 + k);
    let p = agm_elliptic(k1, (1.0 - k).abs() / (1.0 + k));
    Ok((
        ((1.0 + k) * p.e_val + (1.0 - k) * p.k_val) / PI,
        2.0 * (1.0 - k) * p.k_val / PI,
    ))
}

/// `A(K, k) = int_0^(2K) dx / sqrt(1 + k^2 sinh^2 x)`.
pub fn integral_a(big_k: f64, k: f64) -> Result<f64> {
    check_integral_args(big_k, k)?;
    Ok(integrate(
        |x| 1.0 / (1.0 + (k * x.sinh()).powi(2)).sqrt(),
        2.0 * big_k,
    ))
}

/// `B(K, k) = int_0^(2K) tanh^2 x dx / sqrt(1 + k^2 sinh^2 x)`.
pub fn integral_b(big_k: f64, k: f64) -> Result<f64> {
    check_integral_args(big_k, k)?;
    Ok(integrate(
        |x| x.tanh().powi(2) / (1.0 + (k * x.sinh()).powi(2)).sqrt(),
        2.0 * big_k,
    ))
}

fn check_integral_args(big_k: f64, k: f64) -> Result<()> {
    check_finite("K", big_k)?;
    check_finite("k", k)?;
    if big_k < 0.0 || k <= 0.0 {
        return Err(domain("integrals need K >= 0 and k > 0"));
    }
    Ok(())
}

fn integrate<F: Fn(f64) -> f64>(f: F, upper: f64) -> f64 {
    if upper == 0.0 {
        return 0.0;
    }
    // split so the decaying tail does not starve the double-exponential nodes
    let mut total = 0.0;
    let mut lo = 0.0;
    while lo < upper {
        let hi = (lo + 4.0).min(upper);
        total += quadrature::integrate(&f, lo, hi, 1e-15).integral;
        lo = hi;
    }
    total
}

/// `(A(inf, k), B(inf, k))` in closed form.
pub fn integrals_at_infinity(k: f64) -> Result<(f64, f64)> {
    check_modulus(k)?;
    if k < 1.0 {
        let c = complete_elliptic_complement(k)?;
        let kp2 = (1.0 - k) * (1.0 + k);
        Ok((c.k_val, (c.k_val - c.e_val) / kp2))
    } else {
        let l = 1.0 / k;
        let c = complete_elliptic_complement(l)?;
        let lp2 = (1.0 - l) * (1.0 + l);
        Ok((l * c.k_val, l * (c.e_val - l * l * c.k_val) / lp2))
    }
}

/// `f(K, k) = a(k) A(K, k) - b(k) B(K, k)`.
pub fn correlation_f(big_k: f64, k: f64) -> Result<f64> {
    let (a, b) = coefficients(k)?;
    Ok(a * integral_a(big_k, k)? - b * integral_b(big_k, k)?)
}

/// `b(k) ~ (1 - k^2)/pi ln(16 / |1 - k^2|)` near `k = 1`.
pub fn b_near_critical(k: f64) -> Result<f64> {
    check_finite("k", k)?;
    if (1.0 - k).abs() >= 0.1 {
        return Err(domain(format!(
            "asymptotic form needs |1 - k| < 0.1, got k = {k}"
        )));
    }
    let d = (1.0 - k) * (1.0 + k);
    if d == 0.0 {
        return Ok(0.0);
    }
    Ok(d / PI * (16.0 / d.abs()).ln())
}

/// `coth 2K f(K, k) + coth 2L f(L, k)` with `k = 1 / (sinh 2K sinh 2L)`:
/// the nearest-neighbour correlation summed over both bond directions.
pub fn bond_correlation_sum(big_k: f64, big_l: f64) -> Result<f64> {
    for (name, x) in [("K", big_k), ("L", big_l)] {
        check_finite(name, x)?;
        if x <= 0.0 {
            return Err(domain(format!("{name} must be positive")));
        }
    }
    let k = 1.0 / ((2.0 * big_k).sinh() * (2.0 * big_l).sinh());
    let coth = |x: f64| 1.0 / (2.0 * x).tanh();
    Ok(coth(big_k) * correlation_f(big_k, k)? + coth(big_l) * correlation_f(big_l, k)?)
}
