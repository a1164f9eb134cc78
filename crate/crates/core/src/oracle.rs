//! Brute-force ground truth: exhaustive spin sums and perfect-matching counts.

use rayon::prelude::*;

use crate::error::{check_capacity, check_finite, domain, Result};
use crate::model::{Geometry, LatticeSpec, ReducedCouplings};

pub const MAX_ENUMERATION_SITES: usize = 26;
pub const MAX_BACKTRACK_SITES: usize = 36;
pub const MAX_HAFNIAN_DIM: usize = 12;
pub const MAX_PROFILE_WIDTH: usize = 20;

/// Sites joined by weighted bonds. Parallel bonds and self-loops are kept as given.
#[derive(Debug, Clone, PartialEq)]
pub struct WeightedGraph {
    num_sites: usize,
    edges: Vec<(usize, usize, f64)>,
}

impl WeightedGraph {
    pub fn new(num_sites: usize) -> Self {
        WeightedGraph {
            num_sites,
            edges: Vec::new(),
        }
    }

    pub fn add_edge(&mut self, a: usize, b: usize, k: f64) -> Result<()> {
        if a >= self.num_sites || b >= self.num_sites {
            return Err(domain(format!(
                "edge ({a}, {b}) out of range for {} sites",
                self.num_sites
            )));
        }
        check_finite("edge coupling", k)?;
        self.edges.push((a, b, k));
        Ok(())
    }

    pub fn num_sites(&self) -> usize {
        self.num_sites
    }

    pub fn edges(&self) -> &[(usize, usize, f64)] {
        &self.edges
    }
}

/// Dimer activities for horizontal (`z1`) and vertical (`z2`) bonds.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MatchingWeights {
    pub z1: f64,
    pub z2: f64,
}

impl MatchingWeights {
    pub const UNIT: MatchingWeights = MatchingWeights { z1: 1.0, z2: 1.0 };

    pub fn new(z1: f64, z2: f64) -> Result<Self> {
        check_finite("z1", z1)?;
        check_finite("z2", z2)?;
        if z1 < 0.0 || z2 < 0.0 {
            return Err(domain("dimer weights must be non-negative"));
        }
        Ok(MatchingWeights { z1, z2 })
    }
}

const CHUNK_BITS: usize = 6;
const BLOCK: u64 = 4096;

/// `ln sum_sigma exp(sum_e k_e s_a s_b + h sum_i s_i)` over all `2^N` configurations.
pub fn enumerate_partition_graph(g: &WeightedGraph, h: f64) -> Result<f64> {
    let n = g.num_sites;
    check_capacity("sites", n, MAX_ENUMERATION_SITES)?;
    check_finite("h", h)?;
    if n == 0 {
        return Ok(0.0);
    }

    let mut loops = 0.0;
    let mut adj: Vec<Vec<(usize, f64)>> = vec![Vec::new(); n];
    for &(a, b, k) in &g.edges {
        if a == b {
            loops += k;
        } else {
            adj[a].push((b, k));
            adj[b].push((a, k));
        }
    }
    let shift = g.edges.iter().map(|e| e.2.abs()).sum::<f64>() + n as f64 * h.abs();

    let top = CHUNK_BITS.min(n);
    let low = n - top;
    let sums: Vec<f64> = (0u64..1 << top)
        .into_par_iter()
        .map(|chunk| {
            let mut spin = vec![1.0f64; n];
            for (t, s) in spin[low..].iter_mut().enumerate() {
                if chunk >> t & 1 == 1 {
                    *s = -1.0;
                }
            }
            let mut energy = loops + h * spin.iter().sum::<f64>();
            for &(a, b, k) in &g.edges {
                if a != b {
                    energy += k * spin[a] * spin[b];
                }
            }
            let mut total = 0.0;
            let mut block = (energy - shift).exp();
            for step in 1u64..1 << low {
                let i = step.trailing_zeros() as usize;
                let field: f64 = adj[i].iter().map(|&(j, k)| k * spin[j]).sum::<f64>() + h;
                energy -= 2.0 * spin[i] * field;
                spin[i] = -spin[i];
                block += (energy - shift).exp();
                if step % BLOCK == 0 {
                    total += block;
                    block = 0.0;
                }
            }
            total + block
        })
        .collect();
    Ok(shift + sums.iter().sum::<f64>().ln())
}

/// Bond graph of a lattice. Wrap bonds on a side of length 1 or 2 give self-loops
/// or doubled bonds. Honeycomb cells hold sites `A = 2(r cols + c)` and `B = A + 1`;
/// `B(r,c)` joins `A(r+1,c+1)` with `k_h`, `A(r,c)` with `k_v` and `A(r,c+1)` with `k_d`.
pub fn build_lattice_graph(spec: &LatticeSpec, c: &ReducedCouplings) -> Result<WeightedGraph> {
    c.validate()?;
    let (m, n) = (spec.rows(), spec.cols());
    let (wh, wv) = (spec.boundary().wraps_h(), spec.boundary().wraps_v());
    let mut g = WeightedGraph::new(spec.num_sites());
    let step = |i: usize, len: usize, wraps: bool| -> Option<usize> {
        if i + 1 < len {
            Some(i + 1)
        } else if wraps {
            Some(0)
        } else {
            None
        }
    };
    let kd = || {
        c.k_d
            .ok_or_else(|| domain("this geometry needs a third coupling k_d"))
    };
    match spec.geometry() {
        Geometry::Chain | Geometry::Square | Geometry::Triangular => {
            let site = |r: usize, col: usize| r * n + col;
            for r in 0..m {
                for col in 0..n {
                    if let Some(c2) = step(col, n, wh) {
                        g.add_edge(site(r, col), site(r, c2), c.k_h)?;
                    }
                    if spec.geometry() == Geometry::Chain {
                        continue;
                    }
                    if let Some(r2) = step(r, m, wv) {
                        g.add_edge(site(r, col), site(r2, col), c.k_v)?;
                    }
                    if spec.geometry() == Geometry::Triangular {
                        if let (Some(r2), Some(c2)) = (step(r, m, wv), step(col, n, wh)) {
                            g.add_edge(site(r, col), site(r2, c2), kd()?)?;
                        }
                    }
                }
            }
        }
        Geometry::Honeycomb => {
            let a = |r: usize, col: usize| 2 * (r * n + col);
            let k3 = kd()?;
            for r in 0..m {
                for col in 0..n {
                    let b = a(r, col) + 1;
                    g.add_edge(b, a(r, col), c.k_v)?;
                    if let Some(c2) = step(col, n, wh) {
                        g.add_edge(b, a(r, c2), k3)?;
                    }
                    if let (Some(r2), Some(c2)) = (step(r, m, wv), step(col, n, wh)) {
                        g.add_edge(b, a(r2, c2), c.k_h)?;
                    }
                }
            }
        }
    }
    Ok(g)
}

/// Weighted perfect matchings of an `m x n` free grid by backtracking.
pub fn count_matchings(m: usize, n: usize, w: MatchingWeights) -> Result<f64> {
    check_capacity("sites", m * n, MAX_BACKTRACK_SITES)?;
    if m * n % 2 == 1 {
        return Ok(0.0);
    }
    let mut edges = Vec::new();
    for r in 0..m {
        for c in 0..n {
            if c + 1 < n {
                edges.push((r * n + c, r * n + c + 1, w.z1));
            }
            if r + 1 < m {
                edges.push((r * n + c, (r + 1) * n + c, w.z2));
            }
        }
    }
    count_matchings_graph(m * n, &edges)
}

/// Weighted perfect matchings of the `m x n` torus, wrap bonds included.
pub fn count_matchings_torus(m: usize, n: usize, w: MatchingWeights) -> Result<f64> {
    check_capacity("sites", m * n, MAX_BACKTRACK_SITES)?;
    let mut edges = Vec::new();
    for r in 0..m {
        for c in 0..n {
            edges.push((r * n + c, r * n + (c + 1) % n, w.z1));
            edges.push((r * n + c, ((r + 1) % m) * n + c, w.z2));
        }
    }
    count_matchings_graph(m * n, &edges)
}

/// Weighted perfect matchings of an arbitrary graph. Self-loops are ignored.
pub fn count_matchings_graph(num_sites: usize, edges: &[(usize, usize, f64)]) -> Result<f64> {
    check_capacity("sites", num_sites, MAX_BACKTRACK_SITES)?;
    if num_sites % 2 == 1 {
        return Ok(0.0);
    }
    let mut adj: Vec<Vec<(usize, f64)>> = vec![Vec::new(); num_sites];
    for &(a, b, z) in edges {
        if a >= num_sites || b >= num_sites {
            return Err(domain(format!("edge ({a}, {b}) out of range")));
        }
        if a != b {
            adj[a].push((b, z));
            adj[b].push((a, z));
        }
    }
    fn go(adj: &[Vec<(usize, f64)>], used: &mut [bool], from: usize) -> f64 {
        let Some(i) = (from..used.len()).find(|&i| !used[i]) else {
            return 1.0;
        };
        used[i] = true;
        let mut total = 0.0;
        for &(j, z) in &adj[i] {
            if !used[j] {
                used[j] = true;
                total += z * go(adj, used, i + 1);
                used[j] = false;
            }
        }
        used[i] = false;
        total
    }
    let mut used = vec![false; num_sites];
    Ok(go(&adj, &mut used, 0))
}

/// Exact number of domino tilings of an `m x n` rectangle by broken-profile DP.
pub fn count_matchings_profile(m: usize, n: usize) -> Result<u128> {
    let (m, n) = if n > m { (n, m) } else { (m, n) };
    check_capacity("profile width", n, MAX_PROFILE_WIDTH)?;
    if m * n % 2 == 1 {
        return Ok(0);
    }
    // bit c of the profile: cell c of the next row is already covered from above
    let mut dp = vec![0u128; 1 << n];
    dp[0] = 1;
    for _ in 0..m {
        for c in 0..n {
            let mut next = vec![0u128; 1 << n];
            for (mask, &ways) in dp.iter().enumerate() {
                if ways == 0 {
                    continue;
                }
                if mask >> c & 1 == 1 {
                    next[mask & !(1 << c)] += ways;
                    continue;
                }
                next[mask | 1 << c] += ways;
                if c + 1 < n && mask >> (c + 1) & 1 == 0 {
                    next[mask | 1 << (c + 1)] += ways;
                }
            }
            dp = next;
        }
    }
    Ok(dp[0])
}

/// Hafnian of a symmetric matrix by recursive pairing.
pub fn hafnian(a: &[Vec<f64>]) -> Result<f64> {
    let dim = a.len();
    check_capacity("hafnian dimension", dim, MAX_HAFNIAN_DIM)?;
    if dim % 2 == 1 {
        return Err(domain(format!(
            "hafnian needs an even dimension, got {dim}"
        )));
    }
    for (i, row) in a.iter().enumerate() {
        if row.len() != dim {
            return Err(domain("hafnian needs a square matrix"));
        }
        for j in 0..i {
            if row[j] != a[j][i] {
                return Err(domain("hafnian needs a symmetric matrix"));
            }
        }
    }
    fn go(a: &[Vec<f64>], used: &mut [bool]) -> f64 {
        let Some(i) = used.iter().position(|u| !u) else {
            return 1.0;
        };
        used[i] = true;
        let mut total = 0.0;
        for j in i + 1..used.len() {
            if !used[j] && a[i][j] != 0.0 {
                used[j] = true;
                total += a[i][j] * go(a, used);
                used[j] = false;
            }
        }
        used[i] = false;
        total
    }
    Ok(go(a, &mut vec![false; dim]))
}

/// Symmetric dimer weight matrix of an `m x n` free grid.
pub fn grid_weight_matrix(m: usize, n: usize, w: MatchingWeights) -> Vec<Vec<f64>> {
    let mut a = vec![vec![0.0; m * n]; m * n];
    for r in 0..m {
        for c in 0..n {
            let p = r * n + c;
            if c + 1 < n {
                a[p][p + 1] = w.z1;
                a[p + 1][p] = w.z1;
            }
            if r + 1 < m {
                a[p][p + n] = w.z2;
                a[p + n][p] = w.z2;
            }
        }
    }
    a
}
