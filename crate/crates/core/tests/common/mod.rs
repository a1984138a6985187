//! Independent oracles shared by the integration tests.
//!
//! Everything here works from the raw cell values (sorted magnitudes and
//! the cell measure) and never goes through the library's curves.

#![allow(dead_code)]

use oscillo_core::{gen_random, DyadicCube, Grid, Law, StepFunction};

/// Plain pairwise summation, independent of the library's compensated sum.
pub fn pairwise_sum(xs: &[f64]) -> f64 {
    match xs.len() {
        0 => 0.0,
        1 => xs[0],
        n => pairwise_sum(&xs[..n / 2]) + pairwise_sum(&xs[n / 2..]),
    }
}

/// `|f|` sorted descending, with the cell measure.
#[derive(Debug, Clone)]
pub struct Sorted {
    pub mags: Vec<f64>,
    pub mu: f64,
}

impl Sorted {
    pub fn of(f: &StepFunction) -> Self {
        let mut mags: Vec<f64> = f.values().iter().map(|v| v.abs()).collect();
        mags.sort_by(|a, b| b.total_cmp(a));
        Self {
            mags,
            mu: f.grid().cell_measure(),
        }
    }

    pub fn total_measure(&self) -> f64 {
        self.mags.len() as f64 * self.mu
    }

    /// `|{|f| > t}|` by counting.
    pub fn lambda(&self, t: f64) -> f64 {
        self.mags.iter().filter(|&&m| m > t).count() as f64 * self.mu
    }

    /// `∫_t^∞ λ = Σ (|v| − t)_+ μ`.
    pub fn tail(&self, t: f64) -> f64 {
        let parts: Vec<f64> = self.mags.iter().map(|&m| (m - t).max(0.0)).collect();
        pairwise_sum(&parts) * self.mu
    }

    pub fn l1(&self) -> f64 {
        pairwise_sum(&self.mags) * self.mu
    }

    /// `f*(s)` (right-continuous).
    pub fn fstar(&self, s: f64) -> f64 {
        let k = (s / self.mu).floor() as usize;
        self.mags.get(k).copied().unwrap_or(0.0)
    }

    /// `∫_0^s f*`.
    pub fn integral_to(&self, s: f64) -> f64 {
        let k = ((s / self.mu).floor() as usize).min(self.mags.len());
        let head = pairwise_sum(&self.mags[..k]) * self.mu;
        head + (s - k as f64 * self.mu).max(0.0) * self.fstar(s)
    }

    /// `f**(s) − f*(s)`.
    pub fn oscillation(&self, s: f64) -> f64 {
        self.integral_to(s) / s - self.fstar(s)
    }

    /// Distinct magnitudes, descending, including 0 only if some cell is 0.
    pub fn levels(&self) -> Vec<f64> {
        let mut out: Vec<f64> = Vec::new();
        for &m in &self.mags {
            if out.last() != Some(&m) {
                out.push(m);
            }
        }
        out
    }

    /// `sup_s f*(s) s^{1/p}`: increasing on each cell, so right ends.
    pub fn weak_star(&self, p: f64) -> f64 {
        self.mags
            .iter()
            .enumerate()
            .map(|(k, &m)| m * ((k + 1) as f64 * self.mu).powf(1.0 / p))
            .fold(0.0, f64::max)
    }

    /// `sup_s f**(s) s^{1/p}`: per cell `[x, x+μ)` the function is
    /// `A s^{1/p−1} + v s^{1/p}` with `A = ∫_0^x f* − x v`.
    pub fn weak(&self, p: f64) -> f64 {
        let q = 1.0 / p;
        let mut best = 0.0f64;
        let mut head = 0.0;
        for (k, &v) in self.mags.iter().enumerate() {
            let x = k as f64 * self.mu;
            let a = head - x * v;
            let g = |s: f64| a * s.powf(q - 1.0) + v * s.powf(q);
            let right = x + self.mu;
            if k > 0 {
                best = best.max(g(x));
            }
            best = best.max(g(right));
            if v > 0.0 {
                let crit = a * (p - 1.0) / v;
                if crit > x && crit < right {
                    best = best.max(g(crit));
                }
            }
            head += v * self.mu;
        }
        best
    }

    /// `sup_s s^{1/p} (f** − f*)(s)`, `p = ∞` allowed: decreasing on
    /// each cell, so attained at cell left ends `kμ`, `k ≥ 1`.
    pub fn sharp(&self, p: f64) -> f64 {
        let q = if p.is_infinite() { 0.0 } else { 1.0 / p };
        let mut best = 0.0f64;
        let mut head = 0.0;
        for k in 1..=self.mags.len() {
            head += self.mags[k - 1] * self.mu;
            let x = k as f64 * self.mu;
            let c = self.mags.get(k).copied().unwrap_or(0.0);
            best = best.max((head - x * c) * x.powf(q - 1.0));
        }
        best
    }

    /// `sup_t T(t) / λ(t)^{1−1/p}`: at the left end of each plateau of λ.
    pub fn double_sharp(&self, p: f64) -> f64 {
        let power = if p.is_infinite() { 1.0 } else { 1.0 - 1.0 / p };
        let mut starts = vec![0.0];
        starts.extend(self.levels());
        starts
            .into_iter()
            .filter(|&t| self.lambda(t) > 0.0)
            .map(|t| self.tail(t) / self.lambda(t).powf(power))
            .fold(0.0, f64::max)
    }

    /// `sup_t (T(t) t^{p−1})^{1/p}`: `T` is linear between consecutive
    /// levels, so each piece has one stationary point.
    pub fn oneil(&self, p: f64) -> f64 {
        let mut edges = vec![0.0];
        let mut levels = self.levels();
        levels.reverse();
        edges.extend(levels.into_iter().filter(|&l| l > 0.0));
        let mut best = 0.0f64;
        for w in edges.windows(2) {
            let (a, b) = (w[0], w[1]);
            let lam = self.lambda(a);
            let ta = self.tail(a);
            let g = |t: f64| (ta - lam * (t - a)) * t.powf(p - 1.0);
            best = best.max(g(a)).max(g(b));
            let crit = (p - 1.0) * (ta + lam * a) / (p * lam);
            if crit > a && crit < b {
                best = best.max(g(crit));
            }
        }
        best.powf(1.0 / p)
    }
}

/// Row-major cells of a cube, from coordinates alone.
pub fn cube_cells_row_major(grid: &Grid, cube: &DyadicCube) -> Vec<usize> {
    let shift = grid.level() - cube.depth;
    (0..grid.cell_count())
        .filter(|&i| {
            grid.row_major_coords(i)
                .iter()
                .zip(&cube.coords)
                .all(|(&c, &q)| c >> shift == q)
        })
        .collect()
}

/// `(1/|Q|)∫_Q |f − f_Q|` from coordinates.
pub fn mean_osc_direct(f: &StepFunction, cube: &DyadicCube) -> f64 {
    let vals: Vec<f64> = cube_cells_row_major(f.grid(), cube)
        .iter()
        .map(|&i| f.values()[i])
        .collect();
    let mean = pairwise_sum(&vals) / vals.len() as f64;
    let dev: Vec<f64> = vals.iter().map(|v| (v - mean).abs()).collect();
    pairwise_sum(&dev) / vals.len() as f64
}

/// `(1/|Q|)∬_{Q×Q}|f(x) − f(y)|` by the O(k²) double sum.
pub fn double_osc_direct(f: &StepFunction, cube: &DyadicCube) -> f64 {
    let vals: Vec<f64> = cube_cells_row_major(f.grid(), cube)
        .iter()
        .map(|&i| f.values()[i])
        .collect();
    let mu = f.grid().cell_measure();
    let mut terms = Vec::with_capacity(vals.len() * vals.len());
    for a in &vals {
        for b in &vals {
            terms.push((a - b).abs());
        }
    }
    pairwise_sum(&terms) * mu * mu / (vals.len() as f64 * mu)
}

pub fn rel_close(a: f64, b: f64, tol: f64) -> bool {
    (a - b).abs() <= tol * a.abs().max(b.abs())
}

/// `count` random functions on `grid`, cycling through the laws.
pub fn random_functions(seed: u64, grid: &Grid, count: usize) -> Vec<StepFunction> {
    (0..count)
        .map(|i| {
            let law = Law::ALL[i % Law::ALL.len()];
            gen_random(
                oscillo_core::generators::mix_seed(seed, i as u64),
                grid,
                law,
            )
        })
        .collect()
}

/// Every grid with `dim ≤ 3` and at most `max_cells` cells.
pub fn small_grids(max_cells: usize) -> Vec<Grid> {
    let mut out = Vec::new();
    for dim in 1..=3 {
        for level in 0.. {
            let grid = Grid::new(dim, level, 1.0).unwrap();
            if grid.cell_count() > max_cells {
                break;
            }
            out.push(grid);
        }
    }
    out
}
