//! GF(2) matrix reduction, Betti numbers at a grade, fixed-depth barcodes
//! and Hilbert-function grids.

mod barcode;
mod matrix;

use rayon::prelude::*;

use crate::bifiltration::{Bigrade, BigradedComplex};
use crate::scalar::Rational;

pub use barcode::{barcode_fixed_k, Bar, Barcode};
pub use matrix::{Gf2Matrix, Reduction};

/// Ranks of the boundary maps `∂_j` restricted to the cells present at
/// `grade`, for `j` in `0..=max_j`.
fn boundary_ranks(c: &BigradedComplex, alive: &[bool], max_j: usize) -> Vec<usize> {
    let mut by_dim: Vec<Vec<Vec<u32>>> = vec![Vec::new(); max_j + 1];
    for (id, cell) in c.cells().iter().enumerate() {
        if alive[id] && cell.dim <= max_j && cell.dim > 0 {
            by_dim[cell.dim].push(cell.boundary.clone());
        }
    }
    by_dim
        .into_iter()
        .map(|cols| Gf2Matrix::new(cols).rank())
        .collect()
}

fn alive_flags(c: &BigradedComplex, grade: &Bigrade) -> Vec<bool> {
    let rc = c.r_count(&grade.r);
    c.cells().iter().map(|cell| cell.alive(rc, grade.k)).collect()
}

/// `β_i` of the subcomplex present at `grade`: the number of `i`-cells
/// minus the ranks of `∂_i` and `∂_{i+1}`.
pub fn betti_at_grade(c: &BigradedComplex, grade: &Bigrade, i: usize) -> usize {
    betti_numbers_at(c, grade, &[i])[0]
}

/// `β_i` at `grade` for each `i` in `dims`, sharing the rank computations.
pub fn betti_numbers_at(c: &BigradedComplex, grade: &Bigrade, dims: &[usize]) -> Vec<usize> {
    let Some(&hi) = dims.iter().max() else {
        return Vec::new();
    };
    let alive = alive_flags(c, grade);
    let mut count = vec![0usize; hi + 2];
    for (id, cell) in c.cells().iter().enumerate() {
        if alive[id] && cell.dim <= hi + 1 {
            count[cell.dim] += 1;
        }
    }
    let ranks = boundary_ranks(c, &alive, hi + 1);
    dims.iter()
        .map(|&i| count[i] - ranks[i] - ranks[i + 1])
        .collect()
}

/// Ranks of homology on the product of a radius grid (squared radii), a
/// depth range and a list of degrees.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HilbertGrid {
    pub r: Vec<Rational>,
    pub k: Vec<usize>,
    pub dims: Vec<usize>,
    values: Vec<usize>,
}

impl HilbertGrid {
    pub fn get(&self, ri: usize, ki: usize, di: usize) -> usize {
        self.values[(ri * self.k.len() + ki) * self.dims.len() + di]
    }

    pub fn max(&self) -> usize {
        self.values.iter().copied().max().unwrap_or(0)
    }

    /// A grid filled by `f(r index, k index)`, which returns the ranks for
    /// every entry of `dims`.
    pub fn tabulate<F>(r: Vec<Rational>, k: Vec<usize>, dims: Vec<usize>, f: F) -> Self
    where
        F: Fn(usize, usize) -> Vec<usize>,
    {
        let mut values = Vec::with_capacity(r.len() * k.len() * dims.len());
        for ri in 0..r.len() {
            for ki in 0..k.len() {
                let v = f(ri, ki);
                assert_eq!(v.len(), dims.len(), "one rank per degree");
                values.extend(v);
            }
        }
        HilbertGrid { r, k, dims, values }
    }

    /// Entries as `(r index, k index, dim index, rank)`.
    pub fn entries(&self) -> impl Iterator<Item = (usize, usize, usize, usize)> + '_ {
        let (nk, nd) = (self.k.len(), self.dims.len());
        self.values
            .iter()
            .enumerate()
            .map(move |(i, &v)| (i / (nk * nd), i / nd % nk, i % nd, v))
    }
}

/// Evaluate Betti numbers at every grade of `r_grid × k_range`, each grade
/// independently and in parallel.
pub fn hilbert(
    c: &BigradedComplex,
    r_grid: &[Rational],
    k_range: &[usize],
    dims: &[usize],
) -> HilbertGrid {
    let grades: Vec<(usize, usize)> = (0..r_grid.len())
        .flat_map(|ri| (0..k_range.len()).map(move |ki| (ri, ki)))
        .collect();
    let values = grades
        .par_iter()
        .flat_map_iter(|&(ri, ki)| {
            betti_numbers_at(c, &Bigrade::new(r_grid[ri].clone(), k_range[ki]), dims)
        })
        .collect();
    HilbertGrid {
        r: r_grid.to_vec(),
        k: k_range.to_vec(),
        dims: dims.to_vec(),
        values,
    }
}
