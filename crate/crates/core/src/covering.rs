//! Whitney-type dyadic covers of cell sets.
//!
//! For `Ω` with `|Ω| ≤ |Q0|/2`, every cell `c ∈ Ω` has a smallest dyadic
//! ancestor `S(c)` in which `Ω` has density at most 1/2 (`Q0` always
//! qualifies). The maximal cubes among `{S(c)}` form the cover:
//!
//! 1. `|Ω ∩ Q_i| ≤ |Q_i|/2 ≤ |Ω^c ∩ Q_i|`;
//! 2. `Ω ⊂ ⋃ Q_i ⊂ Q0` with pairwise disjoint `Q_i`;
//! 3. `|Ω| ≤ Σ|Q_i| ≤ 2^{n+1}|Ω|`, since the child of `Q_i` containing the
//!    generating cell has density above 1/2.

use serde::Serialize;

use crate::dyadic::{CellSet, DyadicCube, Packing};
use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CoverReport {
    pub cover: Packing,
    /// `|Ω ∩ Q_i| / |Q_i|` per cube.
    pub densities: Vec<f64>,
    /// `Σ |Q_i|`.
    pub total_measure: f64,
    /// `|Ω|`.
    pub omega_measure: f64,
}

/// Outcome of [`verify_cover`], one flag per property.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct CoverCheck {
    pub density: bool,
    pub covers: bool,
    pub measure: bool,
}

impl CoverCheck {
    pub fn all(&self) -> bool {
        self.density && self.covers && self.measure
    }
}

pub fn dyadic_cover(omega: &CellSet) -> Result<CoverReport> {
    let grid = omega.grid();
    let total = omega.count();
    if 2 * total > grid.cell_count() {
        return Err(Error::CoverPrecondition {
            omega: omega.measure(),
            half: grid.measure() / 2.0,
        });
    }
    let members = grid.to_tree_order(omega.members());
    let level = grid.level();
    let b = grid.branching();

    // counts[d][k]: members inside cube (d, k)
    let mut counts: Vec<Vec<usize>> = vec![Vec::new(); level as usize + 1];
    counts[level as usize] = members.iter().map(|&m| m as usize).collect();
    for d in (0..level as usize).rev() {
        counts[d] = counts[d + 1].chunks(b).map(|c| c.iter().sum()).collect();
    }
    let qualifies = |d: usize, k: usize| 2 * counts[d][k] <= grid.cells_at_depth(d as u32);

    // smallest qualifying ancestor of each member cell
    let mut selected: Vec<Vec<bool>> = counts.iter().map(|c| vec![false; c.len()]).collect();
    for (cell, &m) in members.iter().enumerate() {
        if !m {
            continue;
        }
        let (mut d, mut k) = (level as usize, cell);
        while !qualifies(d, k) {
            d -= 1;
            k /= b;
        }
        selected[d][k] = true;
    }

    // keep the maximal ones
    let mut cubes = Vec::new();
    let mut densities = Vec::new();
    for d in 0..=level as usize {
        for k in 0..selected[d].len() {
            if !selected[d][k] {
                continue;
            }
            let covered = (0..d).any(|e| selected[e][k / b.pow((d - e) as u32)]);
            if covered {
                selected[d][k] = false;
                continue;
            }
            cubes.push(grid.cube_from_prefix(d as u32, k));
            densities.push(counts[d][k] as f64 / grid.cells_at_depth(d as u32) as f64);
        }
    }
    let cover = Packing::new(grid.clone(), cubes)?;
    Ok(CoverReport {
        total_measure: cover.total_measure(),
        omega_measure: omega.measure(),
        cover,
        densities,
    })
}

/// Rechecks the three cover properties from row-major membership and cube
/// coordinates alone.
pub fn verify_cover(omega: &CellSet, report: &CoverReport) -> CoverCheck {
    let grid = omega.grid();
    let n = grid.cell_count();
    let mut owner = vec![0usize; n];
    let mut density = true;
    let mut disjoint = true;
    let mut covered_cells = 0usize;
    for cube in report.cover.cubes() {
        if grid.validate_cube(cube).is_err() {
            return CoverCheck {
                density: false,
                covers: false,
                measure: false,
            };
        }
        let (inside, size) = cells_of(grid.level(), cube, n, grid.dim(), |i| {
            owner[i] += 1;
            if owner[i] > 1 {
                disjoint = false;
            }
            omega.contains(i)
        });
        covered_cells += size;
        if 2 * inside > size {
            density = false;
        }
    }
    let covers = disjoint && (0..n).all(|i| !omega.contains(i) || owner[i] == 1);
    let omega_cells = omega.count();
    let bound = (1usize << (grid.dim() + 1)) * omega_cells;
    let measure = omega_cells <= covered_cells && covered_cells <= bound;
    CoverCheck {
        density,
        covers,
        measure,
    }
}

/// Visits the row-major cells of `cube`; returns (cells where `visit` is
/// true, cube size).
fn cells_of(
    level: u32,
    cube: &DyadicCube,
    n: usize,
    dim: usize,
    mut visit: impl FnMut(usize) -> bool,
) -> (usize, usize) {
    let scale = 1usize << (level - cube.depth);
    let per_axis = 1usize << level;
    let mut inside = 0;
    let mut size = 0;
    for i in 0..n {
        let mut rest = i;
        let mut hit = true;
        for axis in (0..dim).rev() {
            let c = rest % per_axis;
            rest /= per_axis;
            if c / scale != cube.coords[axis] as usize {
                hit = false;
                break;
            }
        }
        if hit {
            size += 1;
            if visit(i) {
                inside += 1;
            }
        }
    }
    (inside, size)
}
