//! The reference cube `Q0`, its dyadic subcubes, and cell-indexed data on a
//! uniform dyadic partition.
//!
//! Two cell orders are used:
//!
//! * **row-major** (lexicographic over cell coordinates, last axis fastest):
//!   the public order of [`StepFunction::values`], [`CellSet::members`] and
//!   the JSON file format;
//! * **tree order** (Morton / Z-order with the last axis as the low bit of
//!   each child index): every dyadic cube owns a contiguous block of cells.
//!   Per-cube computations run over tree-ordered copies.
//!
//! In one dimension the two orders coincide.

use std::ops::Range;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::numeric;

/// Largest supported `dim * level` (cells = 2^(dim*level)).
pub const MAX_CELL_BITS: u32 = 26;

/// The cube `Q0 = origin + [0, side)^dim` split into `2^(dim*level)` equal cells.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Grid {
    dim: usize,
    level: u32,
    side: f64,
    origin: Vec<f64>,
}

impl Grid {
    pub fn new(dim: usize, level: u32, side: f64) -> Result<Self> {
        Self::with_origin(dim, level, side, vec![0.0; dim])
    }

    pub fn with_origin(dim: usize, level: u32, side: f64, origin: Vec<f64>) -> Result<Self> {
        if dim == 0 {
            return Err(Error::InvalidGrid("dimension must be positive".into()));
        }
        if !(side.is_finite() && side > 0.0) {
            return Err(Error::InvalidGrid(format!(
                "side must be positive, got {side}"
            )));
        }
        if origin.len() != dim || origin.iter().any(|x| !x.is_finite()) {
            return Err(Error::InvalidGrid(
                "origin must have `dim` finite coordinates".into(),
            ));
        }
        let bits = (dim as u64) * (level as u64);
        if bits > MAX_CELL_BITS as u64 {
            return Err(Error::InvalidGrid(format!(
                "2^{bits} cells exceeds the supported maximum 2^{MAX_CELL_BITS}"
            )));
        }
        Ok(Self {
            dim,
            level,
            side,
            origin,
        })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn level(&self) -> u32 {
        self.level
    }

    pub fn side(&self) -> f64 {
        self.side
    }

    pub fn origin(&self) -> &[f64] {
        &self.origin
    }

    /// Cells per axis, `2^level`.
    pub fn cells_per_axis(&self) -> usize {
        1usize << self.level
    }

    pub fn cell_count(&self) -> usize {
        1usize << (self.dim as u32 * self.level)
    }

    pub fn cell_side(&self) -> f64 {
        self.side / self.cells_per_axis() as f64
    }

    pub fn cell_measure(&self) -> f64 {
        self.measure() / self.cell_count() as f64
    }

    /// `|Q0| = side^dim`.
    pub fn measure(&self) -> f64 {
        self.side.powi(self.dim as i32)
    }

    /// Number of children of a non-leaf cube, `2^dim`.
    pub fn branching(&self) -> usize {
        1usize << self.dim
    }

    /// Number of cells in a cube at `depth`.
    pub fn cells_at_depth(&self, depth: u32) -> usize {
        1usize << (self.dim as u32 * (self.level - depth))
    }

    /// Measure of a cube at `depth`.
    pub fn measure_at_depth(&self, depth: u32) -> f64 {
        self.cells_at_depth(depth) as f64 * self.cell_measure()
    }

    /// Number of cubes at `depth`, `2^(dim*depth)`.
    pub fn cubes_at_depth(&self, depth: u32) -> usize {
        1usize << (self.dim as u32 * depth)
    }

    /// Total number of dyadic cubes of depth `0..=level`.
    pub fn node_count(&self) -> usize {
        (0..=self.level).map(|d| self.cubes_at_depth(d)).sum()
    }

    /// Offset of the first node at `depth` in the flat node numbering
    /// (depth-major, tree order within a depth).
    pub fn depth_offset(&self, depth: u32) -> usize {
        (0..depth).map(|d| self.cubes_at_depth(d)).sum()
    }

    /// Row-major index of a cell given its coordinates.
    pub fn row_major_index(&self, coords: &[u32]) -> usize {
        coords
            .iter()
            .fold(0usize, |acc, &c| (acc << self.level) | c as usize)
    }

    /// Cell coordinates of a row-major index.
    pub fn row_major_coords(&self, mut index: usize) -> Vec<u32> {
        let mask = self.cells_per_axis() - 1;
        let mut coords = vec![0u32; self.dim];
        for c in coords.iter_mut().rev() {
            *c = (index & mask) as u32;
            index >>= self.level;
        }
        coords
    }

    /// Tree-order index of a cell given its coordinates.
    pub fn tree_index(&self, coords: &[u32]) -> usize {
        interleave(coords, self.level)
    }

    /// Permutation `tree_index -> row_major_index`.
    pub fn tree_to_row_major(&self) -> Vec<usize> {
        (0..self.cell_count())
            .map(|t| self.row_major_index(&deinterleave(t, self.dim, self.level)))
            .collect()
    }

    /// Reorder row-major data into tree order.
    pub fn to_tree_order<T: Copy>(&self, row_major: &[T]) -> Vec<T> {
        if self.dim == 1 {
            return row_major.to_vec();
        }
        self.tree_to_row_major()
            .into_iter()
            .map(|r| row_major[r])
            .collect()
    }

    pub fn validate_cube(&self, cube: &DyadicCube) -> Result<()> {
        if cube.depth > self.level {
            return Err(Error::DepthExceedsLevel {
                depth: cube.depth,
                level: self.level,
            });
        }
        if cube.coords.len() != self.dim
            || cube.coords.iter().any(|&c| (c as u64) >> cube.depth != 0)
        {
            return Err(Error::InvalidCube(cube.coords.clone()));
        }
        Ok(())
    }

    /// Range of tree-order cell indices covered by `cube`.
    pub fn cube_cells(&self, cube: &DyadicCube) -> Range<usize> {
        let len = self.cells_at_depth(cube.depth);
        let start = cube.tree_prefix() * len;
        start..start + len
    }

    /// Flat node id of `cube`.
    pub fn node_id(&self, cube: &DyadicCube) -> usize {
        self.depth_offset(cube.depth) + cube.tree_prefix()
    }

    /// Cube with the given depth and tree-order prefix.
    pub fn cube_from_prefix(&self, depth: u32, prefix: usize) -> DyadicCube {
        DyadicCube {
            depth,
            coords: deinterleave(prefix, self.dim, depth),
        }
    }

    /// Cube for a flat node id.
    pub fn cube_from_node(&self, mut node: usize) -> DyadicCube {
        let mut depth = 0;
        while node >= self.cubes_at_depth(depth) {
            node -= self.cubes_at_depth(depth);
            depth += 1;
        }
        self.cube_from_prefix(depth, node)
    }

    /// Lower corner and side of `cube` in space.
    pub fn cube_bounds(&self, cube: &DyadicCube) -> (Vec<f64>, f64) {
        let side = self.side / (1u64 << cube.depth) as f64;
        let lower = cube
            .coords
            .iter()
            .zip(&self.origin)
            .map(|(&c, &o)| o + c as f64 * side)
            .collect();
        (lower, side)
    }
}

fn interleave(coords: &[u32], bits: u32) -> usize {
    let mut idx = 0usize;
    for b in (0..bits).rev() {
        for &c in coords {
            idx = (idx << 1) | ((c >> b) & 1) as usize;
        }
    }
    idx
}

fn deinterleave(mut idx: usize, dim: usize, bits: u32) -> Vec<u32> {
    let mut coords = vec![0u32; dim];
    for b in 0..bits {
        for axis in (0..dim).rev() {
            coords[axis] |= ((idx & 1) as u32) << b;
            idx >>= 1;
        }
    }
    coords
}

/// A dyadic subcube of `Q0`: `depth` halvings per axis, integer coordinates
/// in `[0, 2^depth)`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct DyadicCube {
    pub depth: u32,
    pub coords: Vec<u32>,
}

impl DyadicCube {
    pub fn new(depth: u32, coords: Vec<u32>) -> Self {
        Self { depth, coords }
    }

    /// The whole cube `Q0` in dimension `dim`.
    pub fn root(dim: usize) -> Self {
        Self {
            depth: 0,
            coords: vec![0; dim],
        }
    }

    /// Tree-order index of this cube among cubes of the same depth.
    pub fn tree_prefix(&self) -> usize {
        interleave(&self.coords, self.depth)
    }

    /// `true` if `other` is this cube or one of its descendants.
    pub fn contains(&self, other: &DyadicCube) -> bool {
        if other.depth < self.depth || other.coords.len() != self.coords.len() {
            return false;
        }
        let shift = other.depth - self.depth;
        self.coords
            .iter()
            .zip(&other.coords)
            .all(|(&a, &b)| b >> shift == a)
    }

    /// Children in tree order (last axis fastest).
    pub fn children(&self) -> Vec<DyadicCube> {
        let dim = self.coords.len();
        (0..1usize << dim)
            .map(|k| {
                let coords = self
                    .coords
                    .iter()
                    .enumerate()
                    .map(|(axis, &c)| 2 * c + ((k >> (dim - 1 - axis)) & 1) as u32)
                    .collect();
                DyadicCube {
                    depth: self.depth + 1,
                    coords,
                }
            })
            .collect()
    }

    pub fn parent(&self) -> Option<DyadicCube> {
        (self.depth > 0).then(|| DyadicCube {
            depth: self.depth - 1,
            coords: self.coords.iter().map(|c| c >> 1).collect(),
        })
    }
}

/// Read access to a finite family of equal-measure cells carrying values.
pub trait CellValues {
    fn cell_values(&self) -> &[f64];
    fn cell_measure(&self) -> f64;

    /// `∫|f|`.
    fn l1_norm(&self) -> f64 {
        numeric::sum(self.cell_values().iter().map(|v| v.abs())) * self.cell_measure()
    }

    fn sup_abs(&self) -> f64 {
        self.cell_values().iter().fold(0.0, |m, v| m.max(v.abs()))
    }
}

/// A function constant on each cell of a grid.
#[derive(Debug, Clone, PartialEq)]
pub struct StepFunction {
    grid: Grid,
    values: Vec<f64>,
    tree_values: Vec<f64>,
}

impl StepFunction {
    /// Build from values in row-major cell order.
    pub fn new(grid: Grid, values: Vec<f64>) -> Result<Self> {
        if values.len() != grid.cell_count() {
            return Err(Error::LengthMismatch {
                expected: grid.cell_count(),
                actual: values.len(),
            });
        }
        if let Some(index) = values.iter().position(|v| !v.is_finite()) {
            return Err(Error::NonFinite { index });
        }
        let tree_values = grid.to_tree_order(&values);
        Ok(Self {
            grid,
            values,
            tree_values,
        })
    }

    /// The constant function `c` on `grid`.
    pub fn constant(grid: Grid, c: f64) -> Result<Self> {
        let n = grid.cell_count();
        Self::new(grid, vec![c; n])
    }

    pub fn grid(&self) -> &Grid {
        &self.grid
    }

    /// Values in row-major order.
    pub fn values(&self) -> &[f64] {
        &self.values
    }

    /// Values in tree order.
    pub fn tree_values(&self) -> &[f64] {
        &self.tree_values
    }

    /// Cell values of `cube`, in tree order.
    pub fn cube_values(&self, cube: &DyadicCube) -> Result<&[f64]> {
        self.grid.validate_cube(cube)?;
        Ok(&self.tree_values[self.grid.cube_cells(cube)])
    }

    /// `∫_Q0 f`.
    pub fn integral(&self) -> f64 {
        numeric::sum(self.values.iter().copied()) * self.grid.cell_measure()
    }

    pub fn map(&self, op: impl Fn(f64) -> f64) -> Result<Self> {
        Self::new(
            self.grid.clone(),
            self.values.iter().map(|&v| op(v)).collect(),
        )
    }

    pub fn abs(&self) -> Self {
        self.map(f64::abs).expect("abs of finite values is finite")
    }

    /// Same function on a grid one level finer (every cell split into `2^dim`).
    pub fn refine(&self) -> Result<Self> {
        let grid = Grid::with_origin(
            self.grid.dim,
            self.grid.level + 1,
            self.grid.side,
            self.grid.origin.clone(),
        )?;
        let values = (0..grid.cell_count())
            .map(|i| {
                let coarse: Vec<u32> = grid.row_major_coords(i).iter().map(|c| c >> 1).collect();
                self.values[self.grid.row_major_index(&coarse)]
            })
            .collect();
        Self::new(grid, values)
    }
}

impl CellValues for StepFunction {
    fn cell_values(&self) -> &[f64] {
        &self.values
    }

    fn cell_measure(&self) -> f64 {
        self.grid.cell_measure()
    }
}

/// Build a step function from row-major values.
pub fn make_step_function(grid: Grid, values: Vec<f64>) -> Result<StepFunction> {
    StepFunction::new(grid, values)
}

/// `f_Q = (1/|Q|) ∫_Q f`.
pub fn cube_mean(f: &StepFunction, cube: &DyadicCube) -> Result<f64> {
    let vals = f.cube_values(cube)?;
    Ok(numeric::sum(vals.iter().copied()) / vals.len() as f64)
}

/// All dyadic cubes, depth by depth, tree order within a depth.
pub fn enumerate_cubes(grid: &Grid) -> impl Iterator<Item = DyadicCube> + '_ {
    (0..=grid.level())
        .flat_map(move |d| (0..grid.cubes_at_depth(d)).map(move |k| grid.cube_from_prefix(d, k)))
}

/// A set of cells of a grid.
#[derive(Debug, Clone, PartialEq)]
pub struct CellSet {
    grid: Grid,
    members: Vec<bool>,
}

impl CellSet {
    /// Membership in row-major order.
    pub fn new(grid: Grid, members: Vec<bool>) -> Result<Self> {
        if members.len() != grid.cell_count() {
            return Err(Error::LengthMismatch {
                expected: grid.cell_count(),
                actual: members.len(),
            });
        }
        Ok(Self { grid, members })
    }

    pub fn empty(grid: Grid) -> Self {
        let n = grid.cell_count();
        Self {
            grid,
            members: vec![false; n],
        }
    }

    /// Cells where `f` is nonzero.
    pub fn support_of(f: &StepFunction) -> Self {
        Self {
            grid: f.grid().clone(),
            members: f.values().iter().map(|&v| v != 0.0).collect(),
        }
    }

    /// `{x : f(x) > level}`.
    pub fn superlevel(f: &StepFunction, level: f64) -> Self {
        Self {
            grid: f.grid().clone(),
            members: f.values().iter().map(|&v| v > level).collect(),
        }
    }

    pub fn grid(&self) -> &Grid {
        &self.grid
    }

    pub fn members(&self) -> &[bool] {
        &self.members
    }

    pub fn contains(&self, row_major: usize) -> bool {
        self.members[row_major]
    }

    pub fn count(&self) -> usize {
        self.members.iter().filter(|&&m| m).count()
    }

    pub fn measure(&self) -> f64 {
        self.count() as f64 * self.grid.cell_measure()
    }
}

/// A family of dyadic cubes with pairwise disjoint interiors.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Packing {
    #[serde(skip)]
    grid: Grid,
    cubes: Vec<DyadicCube>,
}

impl Packing {
    /// Validates cube ranges and the antichain property.
    pub fn new(grid: Grid, cubes: Vec<DyadicCube>) -> Result<Self> {
        let mut ranges = Vec::with_capacity(cubes.len());
        for cube in &cubes {
            grid.validate_cube(cube)?;
            ranges.push((grid.cube_cells(cube), cube));
        }
        ranges.sort_by_key(|(r, _)| (r.start, std::cmp::Reverse(r.end)));
        for w in ranges.windows(2) {
            let (a, qa) = &w[0];
            let (b, qb) = &w[1];
            if b.start < a.end {
                return Err(Error::NotAntichain(format!("{qa:?} and {qb:?} overlap")));
            }
        }
        Ok(Self { grid, cubes })
    }

    pub fn empty(grid: Grid) -> Self {
        Self {
            grid,
            cubes: Vec::new(),
        }
    }

    pub fn grid(&self) -> &Grid {
        &self.grid
    }

    pub fn cubes(&self) -> &[DyadicCube] {
        &self.cubes
    }

    pub fn len(&self) -> usize {
        self.cubes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.cubes.is_empty()
    }

    /// Total number of cells covered.
    pub fn covered_cells(&self) -> usize {
        self.cubes
            .iter()
            .map(|q| self.grid.cells_at_depth(q.depth))
            .sum()
    }

    /// `Σ |Q_i|`.
    pub fn total_measure(&self) -> f64 {
        self.covered_cells() as f64 * self.grid.cell_measure()
    }
}
