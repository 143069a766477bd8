use serde::Serialize;

use super::RhomboidTiling;

/// Cell counts of a tiling.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TilingStats {
    pub n: usize,
    pub dim: usize,
    pub cap: usize,
    pub total_cells: usize,
    /// Index `j`: number of `j`-dimensional rhomboids.
    pub cells_by_dim: Vec<usize>,
    /// Index `k`: number of rhomboids with minimum vertex depth `k`.
    pub cells_by_k_min: Vec<usize>,
    /// Number of `(dim + 1)`-dimensional rhomboids.
    pub top_cells: usize,
    pub max_depth: usize,
    /// Index `k`: number of top-dimensional cells of the order-`k` Delaunay
    /// mosaic, which is the number of order-`k` Voronoi vertices.
    pub v_k: Vec<usize>,
}

pub fn tiling_stats(t: &RhomboidTiling) -> TilingStats {
    let d = t.cloud().dim();
    let max_depth = t.cells().iter().map(|c| c.k_max()).max().unwrap_or(0);
    let mut cells_by_dim = vec![0; d + 2];
    let mut cells_by_k_min = vec![0; max_depth + 1];
    let mut v_k = vec![0; max_depth + 1];
    for c in t.cells() {
        cells_by_dim[c.dim()] += 1;
        cells_by_k_min[c.k_min()] += 1;
        if c.dim() == d + 1 {
            for k in c.k_min() + 1..c.k_max() {
                v_k[k] += 1;
            }
        }
    }
    TilingStats {
        n: t.cloud().n(),
        dim: d,
        cap: t.cap(),
        total_cells: t.len(),
        top_cells: cells_by_dim[d + 1],
        cells_by_dim,
        cells_by_k_min,
        max_depth,
        v_k,
    }
}
