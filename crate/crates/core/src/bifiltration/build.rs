use rustc_hash::FxHashMap;

use super::{minimal_grades, radius_index, radius_table, BigradedComplex, Cell, Grade, Model};
use crate::tiling::{RhomboidTiling, SiteSet, SlicedTiling};

/// Site subsets of the tiling's vertices, sorted.
fn vertex_table(t: &RhomboidTiling) -> Vec<SiteSet> {
    let mut v: Vec<SiteSet> = t
        .cells()
        .iter()
        .filter(|c| c.dim() == 0)
        .map(|c| c.key.x_in.clone())
        .collect();
    v.sort_unstable();
    v
}

fn vertex_ids(table: &[SiteSet], sets: &[SiteSet]) -> Vec<u32> {
    let mut ids: Vec<u32> = sets
        .iter()
        .map(|s| table.binary_search(s).expect("vertex of the tiling") as u32)
        .collect();
    ids.sort_unstable();
    ids
}

fn to_u32(ids: &[usize]) -> Vec<u32> {
    ids.iter().map(|&i| i as u32).collect()
}

/// The rhomboid bifiltration: each rhomboid enters at its radius and its
/// minimum vertex depth.
pub fn build_rhomb(t: &RhomboidTiling) -> BigradedComplex {
    let radii = radius_table(t.cells().iter().map(|c| &c.r_sq));
    let table = vertex_table(t);
    let cells = t
        .cells()
        .iter()
        .enumerate()
        .map(|(id, c)| Cell {
            dim: c.dim(),
            boundary: to_u32(t.facets_of(id)),
            grades: vec![Grade {
                r: radius_index(&radii, &c.r_sq),
                k: c.k_min() as u32,
            }],
            depth_hi: c.k_max(),
            vertices: vertex_ids(&table, &c.key.vertices()),
        })
        .collect();
    BigradedComplex::from_parts(Model::Rhomb, radii, table, cells)
}

/// The sliced rhomboid bifiltration: each sliced cell enters at the radius
/// of its parent rhomboid and its own minimum vertex depth.
pub fn build_srhomb(st: &SlicedTiling<'_>) -> BigradedComplex {
    let t = st.tiling();
    let radii = radius_table(t.cells().iter().map(|c| &c.r_sq));
    let table = vertex_table(t);
    let cells = st
        .cells()
        .iter()
        .enumerate()
        .map(|(id, c)| Cell {
            dim: c.dim,
            boundary: to_u32(st.facets_of(id)),
            grades: vec![Grade {
                r: radius_index(&radii, c.r_sq(t)),
                k: c.k_val as u32,
            }],
            depth_hi: c.depth_hi,
            vertices: vertex_ids(&table, &c.vertex_set(t)),
        })
        .collect();
    BigradedComplex::from_parts(Model::SRhomb, radii, table, cells)
}

/// The S-Del bifiltration: every nonempty set of vertices of a sliced cell
/// spans a simplex.
pub fn build_sdel(st: &SlicedTiling<'_>) -> BigradedComplex {
    build_sdel_up_to(st, None)
}

/// S-Del restricted to simplices of dimension at most `max_dim`.
///
/// In layer `k` a simplex is present from the smallest radius of a sliced
/// cell with depth grade at least `k` that contains its vertices. The
/// containing cells have depth grade `j` or `j - 1`, where `j` is the
/// simplex's minimum vertex depth, so there are at most two minimal grades.
pub fn build_sdel_up_to(st: &SlicedTiling<'_>, max_dim: Option<usize>) -> BigradedComplex {
    let t = st.tiling();
    let radii = radius_table(t.cells().iter().map(|c| &c.r_sq));
    let table = vertex_table(t);
    let depth = |v: u32| table[v as usize].len();
    let max_size = max_dim.map_or(usize::MAX, |d| d + 1);

    // Per simplex: best radius index from cells with depth grade equal to
    // its minimum depth, and from cells one below.
    let mut best: FxHashMap<Vec<u32>, [u32; 2]> = FxHashMap::default();
    for c in st.cells() {
        let verts = vertex_ids(&table, &c.vertex_set(t));
        let r = radius_index(&radii, c.r_sq(t));
        let m = verts.len();
        assert!(m < 32, "sliced cell with {m} vertices");
        for mask in 1u32..(1 << m) {
            if mask.count_ones() as usize > max_size {
                continue;
            }
            let simplex: Vec<u32> = (0..m)
                .filter(|&i| mask >> i & 1 == 1)
                .map(|i| verts[i])
                .collect();
            let j = simplex.iter().map(|&v| depth(v)).min().expect("nonempty");
            let slot = j - c.k_val;
            debug_assert!(slot <= 1);
            let e = best.entry(simplex).or_insert([u32::MAX; 2]);
            e[slot] = e[slot].min(r);
        }
    }

    let mut simplices: Vec<(Vec<u32>, [u32; 2])> = best.into_iter().collect();
    simplices.sort_unstable_by(|a, b| (a.0.len(), &a.0).cmp(&(b.0.len(), &b.0)));
    let index: FxHashMap<&[u32], u32> = simplices
        .iter()
        .enumerate()
        .map(|(i, (s, _))| (s.as_slice(), i as u32))
        .collect();
    let cells = simplices
        .iter()
        .map(|(s, r)| {
            let j = s.iter().map(|&v| depth(v)).min().expect("nonempty") as u32;
            let mut boundary: Vec<u32> = if s.len() == 1 {
                Vec::new()
            } else {
                (0..s.len())
                    .map(|skip| {
                        let f: Vec<u32> = s
                            .iter()
                            .enumerate()
                            .filter(|&(i, _)| i != skip)
                            .map(|(_, &v)| v)
                            .collect();
                        index[f.as_slice()]
                    })
                    .collect()
            };
            boundary.sort_unstable();
            let mut grades = Vec::with_capacity(2);
            if r[0] != u32::MAX {
                grades.push(Grade { r: r[0], k: j });
            }
            if r[1] != u32::MAX {
                grades.push(Grade { r: r[1], k: j - 1 });
            }
            Cell {
                dim: s.len() - 1,
                boundary,
                grades: minimal_grades(grades),
                depth_hi: s.iter().map(|&v| depth(v)).max().expect("nonempty"),
                vertices: s.clone(),
            }
        })
        .collect();
    BigradedComplex::from_parts(Model::SDel, radii, table, cells)
}
