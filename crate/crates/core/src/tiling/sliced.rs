use rustc_hash::{FxHashMap, FxHashSet};

use super::{RhomboidKey, RhomboidTiling, SiteSet, TilingError};
use crate::scalar::Rational;

/// Which piece of its parent rhomboid a sliced cell is.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum SlicedKind {
    /// The parent is itself a vertex.
    Vertex,
    /// Intersection with the hyperplane at an interior depth.
    Slice(usize),
    /// The part between depths `k` and `k + 1`.
    Slab(usize),
}

/// A cell of the sliced tiling. Its radius is the parent's radius (the parent
/// is the smallest rhomboid containing it) and its depth grade is its
/// minimum vertex depth.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SlicedCell {
    pub kind: SlicedKind,
    /// Id of the parent rhomboid in the tiling.
    pub parent: usize,
    pub dim: usize,
    pub k_val: usize,
    /// Maximum vertex depth.
    pub depth_hi: usize,
}

impl SlicedCell {
    fn new(kind: SlicedKind, parent: usize, key: &RhomboidKey) -> Self {
        let m = key.dim();
        let (dim, k_val, depth_hi) = match kind {
            SlicedKind::Vertex => (0, key.k_min(), key.k_min()),
            SlicedKind::Slice(k) => (m - 1, k, k),
            SlicedKind::Slab(k) => (m, k, k + 1),
        };
        SlicedCell {
            kind,
            parent,
            dim,
            k_val,
            depth_hi,
        }
    }

    pub fn r_sq<'t>(&self, t: &'t RhomboidTiling) -> &'t Rational {
        &t.cell(self.parent).r_sq
    }

    /// Sorted vertex set.
    pub fn vertex_set(&self, t: &RhomboidTiling) -> Vec<SiteSet> {
        let key = &t.cell(self.parent).key;
        let mut v = match self.kind {
            SlicedKind::Vertex => vec![key.x_in.clone()],
            SlicedKind::Slice(k) => key.vertices_at(Some(k)),
            SlicedKind::Slab(k) => {
                let mut v = key.vertices_at(Some(k));
                v.extend(key.vertices_at(Some(k + 1)));
                v
            }
        };
        v.sort();
        v
    }
}

/// The tiling cut along every integer-depth hyperplane.
#[derive(Clone, Debug)]
pub struct SlicedTiling<'t> {
    tiling: &'t RhomboidTiling,
    cells: Vec<SlicedCell>,
    facets: Vec<Vec<usize>>,
}

impl<'t> SlicedTiling<'t> {
    pub fn tiling(&self) -> &'t RhomboidTiling {
        self.tiling
    }

    pub fn cells(&self) -> &[SlicedCell] {
        &self.cells
    }

    pub fn cell(&self, id: usize) -> &SlicedCell {
        &self.cells[id]
    }

    pub fn len(&self) -> usize {
        self.cells.len()
    }

    pub fn is_empty(&self) -> bool {
        self.cells.is_empty()
    }

    pub fn r_sq(&self, id: usize) -> &'t Rational {
        self.cells[id].r_sq(self.tiling)
    }

    pub fn vertex_set(&self, id: usize) -> Vec<SiteSet> {
        self.cells[id].vertex_set(self.tiling)
    }

    pub fn facets_of(&self, id: usize) -> &[usize] {
        &self.facets[id]
    }

    /// Check that no two cells share a vertex set.
    pub fn check_unique_vertex_sets(&self) -> Result<(), TilingError> {
        let mut seen: FxHashSet<Vec<SiteSet>> = FxHashSet::default();
        for id in 0..self.len() {
            if !seen.insert(self.vertex_set(id)) {
                return Err(TilingError::Internal(format!(
                    "sliced cell {:?} repeats a vertex set",
                    self.cells[id]
                )));
            }
        }
        Ok(())
    }
}

/// Cut every rhomboid into slabs between consecutive depths and slices at
/// its interior depths. Cells are ordered by dimension.
pub fn slice_tiling(t: &RhomboidTiling) -> Result<SlicedTiling<'_>, TilingError> {
    let mut cells = Vec::new();
    for (id, rho) in t.cells().iter().enumerate() {
        let key = &rho.key;
        if key.dim() == 0 {
            cells.push(SlicedCell::new(SlicedKind::Vertex, id, key));
            continue;
        }
        for k in key.k_min()..key.k_max() {
            cells.push(SlicedCell::new(SlicedKind::Slab(k), id, key));
            if k > key.k_min() {
                cells.push(SlicedCell::new(SlicedKind::Slice(k), id, key));
            }
        }
    }
    cells.sort_by_key(|c| (c.dim, c.parent, c.kind));
    let index: FxHashMap<(usize, SlicedKind), usize> = cells
        .iter()
        .enumerate()
        .map(|(i, c)| ((c.parent, c.kind), i))
        .collect();
    let facets = cells
        .iter()
        .map(|c| facet_ids(t, &index, c))
        .collect::<Result<Vec<_>, _>>()?;
    let st = SlicedTiling {
        tiling: t,
        cells,
        facets,
    };
    if cfg!(debug_assertions) {
        st.check_unique_vertex_sets()?;
    }
    Ok(st)
}

fn facet_ids(
    t: &RhomboidTiling,
    index: &FxHashMap<(usize, SlicedKind), usize>,
    c: &SlicedCell,
) -> Result<Vec<usize>, TilingError> {
    let key = &t.cell(c.parent).key;
    let lookup = |parent: usize, kind: SlicedKind| {
        index
            .get(&(parent, kind))
            .copied()
            .ok_or_else(|| TilingError::Internal(format!("missing sliced cell {kind:?} of {parent}")))
    };
    let vertex = |subset: SiteSet| {
        t.vertex_id(&subset)
            .ok_or_else(|| TilingError::Internal(format!("missing vertex {subset:?}")))
            .and_then(|v| lookup(v, SlicedKind::Vertex))
    };
    let mut out = Vec::new();
    match c.kind {
        SlicedKind::Vertex => {}
        SlicedKind::Slab(k) => {
            if key.dim() == 1 {
                out.push(vertex(key.x_in.clone())?);
                out.push(vertex(super::union(&key.x_in, &key.x_on))?);
            } else {
                for &f in t.facets_of(c.parent) {
                    let sigma = &t.cell(f).key;
                    if sigma.k_min() <= k && k < sigma.k_max() {
                        out.push(lookup(f, SlicedKind::Slab(k))?);
                    }
                }
                if k > key.k_min() {
                    out.push(lookup(c.parent, SlicedKind::Slice(k))?);
                }
                if k + 1 < key.k_max() {
                    out.push(lookup(c.parent, SlicedKind::Slice(k + 1))?);
                }
            }
        }
        SlicedKind::Slice(k) => {
            if key.dim() == 2 {
                for v in key.vertices_at(Some(k)) {
                    out.push(vertex(v)?);
                }
            } else {
                for &f in t.facets_of(c.parent) {
                    let sigma = &t.cell(f).key;
                    if sigma.k_min() < k && k < sigma.k_max() {
                        out.push(lookup(f, SlicedKind::Slice(k))?);
                    }
                }
            }
        }
    }
    out.sort_unstable();
    out.dedup();
    Ok(out)
}

/// Facets of a sliced cell, deduplicated. A vertex has none.
pub fn boundary_sliced(st: &SlicedTiling<'_>, id: usize) -> Result<Vec<usize>, TilingError> {
    if st.cell(id).dim == 0 {
        return Err(TilingError::VertexBoundary);
    }
    Ok(st.facets_of(id).to_vec())
}

/// The order-`k` Delaunay mosaic at radius `r` (all radii when `None`): the
/// sliced cells lying in the depth-`k` hyperplane.
pub fn mosaic(t: &RhomboidTiling, k: usize, r: Option<&Rational>) -> Vec<SlicedCell> {
    let mut out = Vec::new();
    for (id, rho) in t.cells().iter().enumerate() {
        if r.is_some_and(|r| rho.r_sq > *r) {
            continue;
        }
        let key = &rho.key;
        if key.dim() == 0 && key.k_min() == k {
            out.push(SlicedCell::new(SlicedKind::Vertex, id, key));
        } else if key.dim() >= 2 && key.k_min() < k && k < key.k_max() {
            out.push(SlicedCell::new(SlicedKind::Slice(k), id, key));
        }
    }
    out
}
