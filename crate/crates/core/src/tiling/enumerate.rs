use std::collections::VecDeque;
use std::sync::Arc;

use itertools::Itertools;
use rayon::prelude::*;
use rustc_hash::{FxHashMap, FxHashSet};

use super::{union, Rhomboid, RhomboidKey, RhomboidTiling, SiteSet, TilingError};
use crate::geom::kernel::{classify, delaunay_seed, Frame, Pencil, XIndex};
use crate::geom::{GeomError, PointCloud, Violation, ViolationKind};
use crate::scalar::Rational;

fn check_size(cloud: &PointCloud) -> Result<(), TilingError> {
    let needed = cloud.dim() + 1;
    if cloud.n() < needed {
        return Err(TilingError::TooFewSites {
            n: cloud.n(),
            dim: cloud.dim(),
            needed,
        });
    }
    Ok(())
}

fn cospherical(on: &[usize], extra: &[usize]) -> TilingError {
    let mut sites: Vec<usize> = on.iter().chain(extra).copied().collect();
    sites.sort_unstable();
    TilingError::Geom(GeomError::GeneralPosition(Violation {
        kind: ViolationKind::Cospherical,
        sites,
    }))
}

fn to_usize(s: &[u32]) -> Vec<usize> {
    s.iter().map(|&x| x as usize).collect()
}

fn to_u32(s: &[usize]) -> SiteSet {
    s.iter().map(|&x| x as u32).collect()
}

/// The complete rhomboid tiling, from the circumsphere of every
/// `(dim + 1)`-subset of sites closed under faces.
///
/// Every general-position violation is detected along the way: dependent
/// subsets have no circumsphere and cospherical ones put a site on one.
pub fn enumerate_rhomboids(cloud: &PointCloud) -> Result<RhomboidTiling, TilingError> {
    check_size(cloud)?;
    let index = XIndex::new(cloud);
    let subsets: Vec<Vec<usize>> = (0..cloud.n()).combinations(cloud.dim() + 1).collect();
    let tops = subsets
        .par_iter()
        .map(|t| {
            let frame = Frame::new(cloud, t)?;
            let c = classify(&frame, &index, usize::MAX).expect("no limit");
            if !c.extra_on.is_empty() {
                return Err(cospherical(t, &c.extra_on));
            }
            Ok(RhomboidKey::new(to_u32(&c.inside), to_u32(t)))
        })
        .collect::<Result<Vec<_>, TilingError>>()?;
    assemble(cloud, tops, cloud.n())
}

/// The rhomboids whose vertex depths are all at most `cap`.
///
/// Top rhomboids with at most `cap` interior sites are found by walking
/// from a Delaunay cell across shared codimension-one faces, so the work
/// grows with the output rather than with `n^(dim + 1)`. General position is
/// only checked locally.
pub fn enumerate_truncated(cloud: &PointCloud, cap: usize) -> Result<RhomboidTiling, TilingError> {
    if cap < 1 {
        return Err(TilingError::InvalidCap);
    }
    check_size(cloud)?;
    let seed = RhomboidKey::new(vec![], to_u32(&delaunay_seed(cloud)?));
    let index = XIndex::new(cloud);
    let mut tops: FxHashSet<RhomboidKey> = FxHashSet::default();
    let mut seen_faces: FxHashSet<RhomboidKey> = FxHashSet::default();
    let mut queue = VecDeque::new();
    tops.insert(seed.clone());
    queue.push_back(seed);
    while let Some(top) = queue.pop_front() {
        for (i, &t) in top.x_on.iter().enumerate() {
            let mut face_on = top.x_on.clone();
            face_on.remove(i);
            let mut pencil: Option<Pencil<'_>> = None;
            for x_in in [top.x_in.clone(), union(&top.x_in, &[t])] {
                let face = RhomboidKey {
                    x_in,
                    x_on: face_on.clone(),
                };
                if seen_faces.contains(&face) {
                    continue;
                }
                if pencil.is_none() {
                    pencil = Some(Pencil::new(cloud, &to_usize(&face_on))?);
                }
                let p = pencil.as_ref().expect("just built");
                let (lo, hi) = p.interval(&index, &to_usize(&face.x_in))?;
                for end in [lo, hi].into_iter().flatten() {
                    let end = end as u32;
                    let x_in: SiteSet = face.x_in.iter().copied().filter(|&s| s != end).collect();
                    if x_in.len() > cap {
                        continue;
                    }
                    let next = RhomboidKey {
                        x_in,
                        x_on: union(&face.x_on, &[end]),
                    };
                    if tops.insert(next.clone()) {
                        queue.push_back(next);
                    }
                }
                seen_faces.insert(face);
            }
        }
    }
    
    assemble(cloud, tops.into_iter().collect(), cap)
}

/// Close `tops` under faces, compute every radius and keep the cells whose
/// vertex depths are at most `cap`.
///
/// `tops` must hold every top rhomboid with at most `cap` interior sites.
/// The radius of a rhomboid is the smallest radius among the spheres that
/// realize it or one of its cofaces; each coface contributes the smallest
/// sphere through its boundary sites when that sphere realizes it exactly.
/// Cofaces have no more interior sites, so working over all cells with at
/// most `cap` interior sites loses nothing.
fn assemble(
    cloud: &PointCloud,
    tops: Vec<RhomboidKey>,
    cap: usize,
) -> Result<RhomboidTiling, TilingError> {
    let mut set: FxHashSet<RhomboidKey> = FxHashSet::default();
    for top in &tops {
        set.extend(top.faces().into_iter().filter(|f| f.k_min() <= cap));
    }
    let mut keys: Vec<RhomboidKey> = set.into_iter().collect();
    keys.sort_by(|a, b| (a.dim(), a).cmp(&(b.dim(), b)));
    let index: FxHashMap<&RhomboidKey, usize> =
        keys.iter().enumerate().map(|(i, k)| (k, i)).collect();

    let mut on_sets: Vec<&SiteSet> = keys
        .iter()
        .filter(|k| k.dim() > 0)
        .map(|k| &k.x_on)
        .collect();
    on_sets.sort_unstable();
    on_sets.dedup();
    let xindex = XIndex::new(cloud);
    let dim = cloud.dim();
    let own = on_sets
        .par_iter()
        .map(|on| -> Result<Option<(usize, Rational)>, TilingError> {
            let on_sites = to_usize(on);
            let frame = Frame::new(cloud, &on_sites)?;
            let Some(c) = classify(&frame, &xindex, cap) else {
                return Ok(None);
            };
            if !c.extra_on.is_empty() {
                if on.len() + c.extra_on.len() > dim + 1 {
                    return Err(cospherical(&on_sites, &c.extra_on));
                }
                // Realized by a larger coface instead.
                return Ok(None);
            }
            let key = RhomboidKey {
                x_in: to_u32(&c.inside),
                x_on: (*on).clone(),
            };
            Ok(index.get(&key).map(|&id| (id, frame.radius_sq())))
        })
        .collect::<Result<Vec<_>, _>>()?;

    let mut radius: Vec<Option<Rational>> = vec![None; keys.len()];
    for (id, r) in own.into_iter().flatten() {
        radius[id] = Some(r);
    }
    for id in (0..keys.len()).rev() {
        let Some(r) = radius[id].clone() else {
            return Err(TilingError::Internal(format!(
                "no realizing sphere found for {:?}",
                keys[id]
            )));
        };
        for f in keys[id].facets() {
            if let Some(&fid) = index.get(&f) {
                match &radius[fid] {
                    Some(cur) if *cur <= r => {}
                    _ => radius[fid] = Some(r.clone()),
                }
            }
        }
    }

    let cells = keys
        .iter()
        .zip(radius)
        .filter(|(k, _)| k.k_max() <= cap)
        .map(|(k, r)| Rhomboid {
            key: k.clone(),
            r_sq: r.expect("checked above"),
        })
        .collect();
    RhomboidTiling::from_cells(Arc::new(cloud.clone()), cells, cap)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geom::{min_sphere_constrained, GeomError};
    use crate::scalar::Scalar;
    use proptest::prelude::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn key(i: &[u32], o: &[u32]) -> RhomboidKey {
        RhomboidKey::new(i.to_vec(), o.to_vec())
    }

    fn q(v: i64) -> Rational {
        Rational::from_i64(v)
    }

    pub(crate) fn random_cloud(dim: usize, n: usize, seed: u64) -> PointCloud {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let rows: Vec<Vec<f64>> = (0..n)
            .map(|_| (0..dim).map(|_| (rng.gen::<f64>() * 1e6).round() / 1e6).collect())
            .collect();
        PointCloud::from_f64(dim, &rows).unwrap()
    }

    #[test]
    fn five_collinear_sites() {
        let c = PointCloud::from_integers(1, &[&[0], &[1], &[2], &[3], &[4]]).unwrap();
        let t = enumerate_rhomboids(&c).unwrap();
        let r = t.get(&key(&[2], &[1, 3])).expect("present");
        assert_eq!(r.r_sq, q(1));
        assert_eq!(t.cells().iter().filter(|c| c.dim() == 2).count(), 10);
    }

    #[test]
    fn right_triangle() {
        let c = PointCloud::from_integers(2, &[&[0, 0], &[2, 0], &[0, 2]]).unwrap();
        let t = enumerate_rhomboids(&c).unwrap();
        assert_eq!(t.len(), 27);
        assert_eq!(t.cells().iter().filter(|c| c.dim() == 0).count(), 8);
        let top = t.get(&key(&[], &[0, 1, 2])).unwrap();
        assert_eq!(top.r_sq, q(2));
        for f in top.key.facets() {
            assert!(t.get(&f).is_some());
            let rest: Vec<usize> = (0..3)
                .filter(|s| !f.x_in.contains(&(*s as u32)) && !f.x_on.contains(&(*s as u32)))
                .collect();
            let sphere = min_sphere_constrained(&c, &to_usize(&f.x_on), &to_usize(&f.x_in), &rest)
                .unwrap();
            assert!(sphere.is_some());
        }
        // The pair {0, 1} with 2 inside: the diametral circle of 01 excludes
        // 2, so the cell is realized only by larger circles.
        assert_eq!(t.get(&key(&[2], &[0, 1])).unwrap().r_sq, q(2));
        assert_eq!(t.get(&key(&[], &[0, 1])).unwrap().r_sq, q(1));
    }

    #[test]
    fn too_few_sites() {
        let c = PointCloud::from_integers(2, &[&[0, 0], &[1, 0]]).unwrap();
        assert!(matches!(
            enumerate_rhomboids(&c),
            Err(TilingError::TooFewSites { n: 2, needed: 3, .. })
        ));
        assert!(matches!(
            enumerate_truncated(&c, 2),
            Err(TilingError::TooFewSites { .. })
        ));
    }

    #[test]
    fn violations_are_detected() {
        let c = PointCloud::from_integers(2, &[&[1, 0], &[0, 1], &[-1, 0], &[0, -1], &[5, 5]])
            .unwrap();
        assert!(matches!(
            enumerate_rhomboids(&c),
            Err(TilingError::Geom(GeomError::GeneralPosition(Violation {
                kind: ViolationKind::Cospherical,
                ..
            })))
        ));
        let c = PointCloud::from_integers(2, &[&[0, 0], &[1, 1], &[2, 2], &[0, 3]]).unwrap();
        assert!(matches!(
            enumerate_rhomboids(&c),
            Err(TilingError::Geom(GeomError::GeneralPosition(Violation {
                kind: ViolationKind::AffinelyDependent,
                ..
            })))
        ));
    }

    #[test]
    fn right_angles_are_not_violations() {
        // Site 2 lies on the circle with diameter 01.
        let c = PointCloud::from_integers(2, &[&[-5, 0], &[5, 0], &[3, 4], &[1, -7]]).unwrap();
        let t = enumerate_rhomboids(&c).unwrap();
        assert_eq!(t.get(&key(&[], &[0, 1])).unwrap().r_sq, q(25));
        assert_eq!(t.get(&key(&[2], &[0, 1])).unwrap().r_sq, q(25));
        check_radii(&t);
    }

    fn check_radii(t: &RhomboidTiling) {
        let c = t.cloud();
        for cell in t.cells() {
            let rest: Vec<usize> = (0..c.n() as u32)
                .filter(|s| !cell.x_in().contains(s) && !cell.x_on().contains(s))
                .map(|s| s as usize)
                .collect();
            let s = min_sphere_constrained(c, &to_usize(cell.x_on()), &to_usize(cell.x_in()), &rest)
                .unwrap()
                .expect("every stored cell is realizable");
            assert_eq!(s.radius_sq, cell.r_sq, "{:?}", cell.key);
        }
    }

    #[test]
    fn radii_match_the_constrained_solver() {
        for (dim, n, seed) in [(1, 6, 1), (2, 6, 2), (2, 7, 3), (3, 6, 4)] {
            check_radii(&enumerate_rhomboids(&random_cloud(dim, n, seed)).unwrap());
        }
    }

    #[test]
    fn truncation_of_the_full_tiling() {
        let c = random_cloud(2, 7, 11);
        let full = enumerate_rhomboids(&c).unwrap();
        let t = full.truncate(2).unwrap();
        assert!(t.cells().iter().all(|c| c.k_max() <= 2));
        assert_eq!(full.truncate(7).unwrap().len(), full.len());
        assert!(matches!(full.truncate(0), Err(TilingError::InvalidCap)));
    }

    fn same_cells(a: &RhomboidTiling, b: &RhomboidTiling) {
        assert_eq!(a.len(), b.len());
        for (x, y) in a.cells().iter().zip(b.cells()) {
            assert_eq!(x, y);
        }
    }

    #[test]
    fn walk_finds_the_complete_tiling() {
        for (dim, n, seed) in [(1, 7, 5), (2, 8, 6), (3, 7, 7)] {
            let c = random_cloud(dim, n, seed);
            same_cells(&enumerate_rhomboids(&c).unwrap(), &enumerate_truncated(&c, n).unwrap());
        }
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(24))]

        #[test]
        fn walk_matches_brute_force_truncation(
            dim in 1usize..=3, extra in 0usize..6, cap in 1usize..5, seed in any::<u64>(),
        ) {
            let n = dim + 2 + extra;
            let c = random_cloud(dim, n, seed);
            let full = enumerate_rhomboids(&c).unwrap();
            let walked = enumerate_truncated(&c, cap).unwrap();
            same_cells(&full.truncate(cap).unwrap(), &walked);
        }

        #[test]
        fn face_monotonicity(dim in 1usize..=3, extra in 0usize..5, seed in any::<u64>()) {
            let t = enumerate_rhomboids(&random_cloud(dim, dim + 2 + extra, seed)).unwrap();
            for (id, cell) in t.cells().iter().enumerate() {
                for &f in t.facets_of(id) {
                    let face = t.cell(f);
                    prop_assert!(face.r_sq <= cell.r_sq);
                    prop_assert!(face.k_min() >= cell.k_min());
                }
            }
        }
    }
}
