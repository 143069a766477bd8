//! The rhomboid tiling of a point cloud: combinatorial rhomboids, their
//! faces, filtration radii, the sliced tiling and order-k Delaunay mosaics.

mod enumerate;
mod sliced;
mod stats;

use std::sync::Arc;

use rustc_hash::FxHashMap;
use thiserror::Error;

use crate::geom::{GeomError, PointCloud};
use crate::scalar::Rational;

pub use enumerate::{enumerate_rhomboids, enumerate_truncated};
pub use sliced::{boundary_sliced, mosaic, slice_tiling, SlicedCell, SlicedKind, SlicedTiling};
pub use stats::{tiling_stats, TilingStats};

/// Sorted site indices.
pub type SiteSet = Vec<u32>;

#[derive(Debug, Error)]
pub enum TilingError {
    #[error(transparent)]
    Geom(#[from] GeomError),
    #[error("need at least {needed} sites in dimension {dim}, got {n}")]
    TooFewSites { n: usize, dim: usize, needed: usize },
    #[error("a vertex has no boundary")]
    VertexBoundary,
    #[error("depth cap must be at least 1")]
    InvalidCap,
    #[error("internal enumeration error: {0}")]
    Internal(String),
}

/// Sorted union of two disjoint sorted sets.
pub(crate) fn union(a: &[u32], b: &[u32]) -> SiteSet {
    let mut out = Vec::with_capacity(a.len() + b.len());
    let (mut i, mut j) = (0, 0);
    while i < a.len() && j < b.len() {
        if a[i] < b[j] {
            out.push(a[i]);
            i += 1;
        } else {
            out.push(b[j]);
            j += 1;
        }
    }
    out.extend_from_slice(&a[i..]);
    out.extend_from_slice(&b[j..]);
    out
}

fn is_subset(a: &[u32], b: &[u32]) -> bool {
    let mut j = 0;
    for x in a {
        while j < b.len() && b[j] < *x {
            j += 1;
        }
        if j == b.len() || b[j] != *x {
            return false;
        }
        j += 1;
    }
    true
}

/// A combinatorial rhomboid `(X_in, X_on)`: the vertex set
/// `{X_in ∪ Q : Q ⊆ X_on}`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct RhomboidKey {
    pub x_in: SiteSet,
    pub x_on: SiteSet,
}

impl RhomboidKey {
    pub fn new(mut x_in: SiteSet, mut x_on: SiteSet) -> Self {
        x_in.sort_unstable();
        x_on.sort_unstable();
        debug_assert!(x_in.iter().all(|s| x_on.binary_search(s).is_err()));
        RhomboidKey { x_in, x_on }
    }

    pub fn vertex(subset: SiteSet) -> Self {
        Self::new(subset, vec![])
    }

    pub fn dim(&self) -> usize {
        self.x_on.len()
    }

    pub fn k_min(&self) -> usize {
        self.x_in.len()
    }

    pub fn k_max(&self) -> usize {
        self.x_in.len() + self.x_on.len()
    }

    /// All `2^dim` vertices.
    pub fn vertices(&self) -> Vec<SiteSet> {
        self.vertices_at(None)
    }

    /// Vertices at one depth, or all of them.
    pub fn vertices_at(&self, depth: Option<usize>) -> Vec<SiteSet> {
        let m = self.dim();
        (0u32..1 << m)
            .filter(|mask| depth.is_none_or(|k| mask.count_ones() as usize + self.k_min() == k))
            .map(|mask| {
                let q: Vec<u32> = (0..m)
                    .filter(|i| mask >> i & 1 == 1)
                    .map(|i| self.x_on[i])
                    .collect();
                union(&self.x_in, &q)
            })
            .collect()
    }

    pub fn has_vertex(&self, v: &[u32]) -> bool {
        is_subset(&self.x_in, v) && v.len() <= self.k_max() && {
            let all = union(&self.x_in, &self.x_on);
            is_subset(v, &all)
        }
    }

    /// Every face, from the `3^dim` ways of splitting `X_on` into sites moved
    /// in, kept on and moved out. Includes `self`.
    pub fn faces(&self) -> Vec<RhomboidKey> {
        let m = self.dim();
        let mut out = Vec::with_capacity(3usize.pow(m as u32));
        let mut code = vec![0u8; m];
        loop {
            let mut x_in = self.x_in.clone();
            let mut x_on = Vec::new();
            for (i, &c) in code.iter().enumerate() {
                match c {
                    0 => x_on.push(self.x_on[i]),
                    1 => x_in.push(self.x_on[i]),
                    _ => {}
                }
            }
            out.push(RhomboidKey::new(x_in, x_on));
            let mut i = 0;
            while i < m && code[i] == 2 {
                code[i] = 0;
                i += 1;
            }
            if i == m {
                break;
            }
            code[i] += 1;
        }
        out
    }

    /// The `2 dim` codimension-one faces.
    pub fn facets(&self) -> Vec<RhomboidKey> {
        let mut out = Vec::with_capacity(2 * self.dim());
        for (i, &s) in self.x_on.iter().enumerate() {
            let mut rest = self.x_on.clone();
            rest.remove(i);
            out.push(RhomboidKey::new(union(&self.x_in, &[s]), rest.clone()));
            out.push(RhomboidKey {
                x_in: self.x_in.clone(),
                x_on: rest,
            });
        }
        out
    }
}

/// Codimension-one faces of a rhomboid; a vertex has none.
pub fn boundary_rhomboid(key: &RhomboidKey) -> Result<Vec<RhomboidKey>, TilingError> {
    if key.dim() == 0 {
        return Err(TilingError::VertexBoundary);
    }
    Ok(key.facets())
}

/// All faces of a rhomboid including itself.
pub fn faces(key: &RhomboidKey) -> Vec<RhomboidKey> {
    key.faces()
}

/// A stored rhomboid with its squared filtration radius.
#[derive(Clone, Debug, PartialEq)]
pub struct Rhomboid {
    pub key: RhomboidKey,
    pub r_sq: Rational,
}

impl Rhomboid {
    pub fn dim(&self) -> usize {
        self.key.dim()
    }
    pub fn k_min(&self) -> usize {
        self.key.k_min()
    }
    pub fn k_max(&self) -> usize {
        self.key.k_max()
    }
    pub fn x_in(&self) -> &[u32] {
        &self.key.x_in
    }
    pub fn x_on(&self) -> &[u32] {
        &self.key.x_on
    }
}

/// A face-closed set of rhomboids, ordered by dimension so that facets
/// precede their cofaces.
///
/// A complete tiling holds every rhomboid; a capped one holds exactly those
/// with all vertex depths at most the cap.
#[derive(Clone, Debug)]
pub struct RhomboidTiling {
    cloud: Arc<PointCloud>,
    cells: Vec<Rhomboid>,
    index: FxHashMap<RhomboidKey, usize>,
    facets: Vec<Vec<usize>>,
    cap: usize,
}

impl RhomboidTiling {
    /// Assemble from rhomboids that are closed under faces.
    pub fn from_cells(
        cloud: Arc<PointCloud>,
        mut cells: Vec<Rhomboid>,
        cap: usize,
    ) -> Result<Self, TilingError> {
        cells.sort_by(|a, b| (a.dim(), &a.key).cmp(&(b.dim(), &b.key)));
        let index: FxHashMap<RhomboidKey, usize> = cells
            .iter()
            .enumerate()
            .map(|(i, c)| (c.key.clone(), i))
            .collect();
        if index.len() != cells.len() {
            return Err(TilingError::Internal("duplicate rhomboid".into()));
        }
        let facets = cells
            .iter()
            .map(|c| {
                let mut ids = c
                    .key
                    .facets()
                    .iter()
                    .map(|f| {
                        index.get(f).copied().ok_or_else(|| {
                            TilingError::Internal(format!("missing facet {f:?} of {:?}", c.key))
                        })
                    })
                    .collect::<Result<Vec<_>, _>>()?;
                ids.sort_unstable();
                Ok(ids)
            })
            .collect::<Result<Vec<_>, TilingError>>()?;
        Ok(RhomboidTiling {
            cloud,
            cells,
            index,
            facets,
            cap,
        })
    }

    pub fn cloud(&self) -> &PointCloud {
        &self.cloud
    }

    pub fn cloud_arc(&self) -> &Arc<PointCloud> {
        &self.cloud
    }

    pub fn cells(&self) -> &[Rhomboid] {
        &self.cells
    }

    pub fn len(&self) -> usize {
        self.cells.len()
    }

    pub fn is_empty(&self) -> bool {
        self.cells.is_empty()
    }

    pub fn cell(&self, id: usize) -> &Rhomboid {
        &self.cells[id]
    }

    pub fn id_of(&self, key: &RhomboidKey) -> Option<usize> {
        self.index.get(key).copied()
    }

    pub fn get(&self, key: &RhomboidKey) -> Option<&Rhomboid> {
        self.id_of(key).map(|i| &self.cells[i])
    }

    pub fn facets_of(&self, id: usize) -> &[usize] {
        &self.facets[id]
    }

    /// Maximum vertex depth a stored cell may have.
    pub fn cap(&self) -> usize {
        self.cap
    }

    pub fn is_complete(&self) -> bool {
        self.cap >= self.cloud.n()
    }

    /// Id of the vertex with the given site subset.
    pub fn vertex_id(&self, subset: &[u32]) -> Option<usize> {
        self.id_of(&RhomboidKey::vertex(subset.to_vec()))
    }

    /// The rhomboids with every vertex depth at most `k`.
    pub fn truncate(&self, k: usize) -> Result<RhomboidTiling, TilingError> {
        if k < 1 {
            return Err(TilingError::InvalidCap);
        }
        let cells = self
            .cells
            .iter()
            .filter(|c| c.k_max() <= k)
            .cloned()
            .collect();
        RhomboidTiling::from_cells(self.cloud.clone(), cells, k.min(self.cap))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn key(i: &[u32], o: &[u32]) -> RhomboidKey {
        RhomboidKey::new(i.to_vec(), o.to_vec())
    }

    #[test]
    fn face_counts() {
        let r = key(&[5], &[1, 3]);
        let f = r.faces();
        assert_eq!(f.len(), 9);
        assert_eq!(f.iter().filter(|k| k.dim() == 0).count(), 4);
        assert_eq!(f.iter().filter(|k| k.dim() == 1).count(), 4);
        assert!(f.contains(&r));
        assert_eq!(key(&[2], &[]).faces(), vec![key(&[2], &[])]);
        assert_eq!(key(&[], &[0, 1, 2]).faces().len(), 27);
    }

    #[test]
    fn boundaries() {
        let e = key(&[4], &[7]);
        let mut b = boundary_rhomboid(&e).unwrap();
        b.sort();
        assert_eq!(b, vec![key(&[4], &[]), key(&[4, 7], &[])]);
        assert_eq!(boundary_rhomboid(&key(&[], &[0, 1])).unwrap().len(), 4);
        assert_eq!(boundary_rhomboid(&key(&[], &[0, 1, 2])).unwrap().len(), 6);
        assert!(matches!(
            boundary_rhomboid(&key(&[1], &[])),
            Err(TilingError::VertexBoundary)
        ));
    }

    #[test]
    fn vertices_and_depths() {
        let r = key(&[2], &[1, 3]);
        let mut v = r.vertices();
        v.sort();
        assert_eq!(v, vec![vec![1, 2], vec![1, 2, 3], vec![2], vec![2, 3]]);
        assert_eq!((r.k_min(), r.k_max(), r.dim()), (1, 3, 2));
        assert_eq!(r.vertices_at(Some(2)), vec![vec![1, 2], vec![2, 3]]);
        assert!(r.has_vertex(&[1, 2]));
        assert!(!r.has_vertex(&[1, 3]));
        assert!(!r.has_vertex(&[1, 2, 3, 4]));
    }

    #[test]
    fn facets_are_faces_of_codimension_one() {
        let r = key(&[0, 9], &[2, 4, 6]);
        let faces = r.faces();
        let facets = r.facets();
        assert_eq!(facets.len(), 6);
        for f in &facets {
            assert!(faces.contains(f));
            assert_eq!(f.dim(), 2);
        }
    }
}
