use std::collections::BTreeSet;

use multicover::bifiltration::{
    build_rhomb, build_sdel, build_srhomb, Bigrade, BigradedComplex,
};
use multicover::geom::check_general_position;
use multicover::homology::{barcode_fixed_k, betti_at_grade, betti_numbers_at};
use multicover::oracle::cech_multicover_nerve;
use multicover::tiling::{enumerate_rhomboids, enumerate_truncated, slice_tiling, tiling_stats, SlicedKind};
use multicover::{PointCloud, Rational};
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// A cloud with 4-decimal coordinates, or `None` when the draw is not in
/// general position.
fn cloud(dim: usize, n: usize, seed: u64) -> Option<PointCloud> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let rows: Vec<Vec<f64>> = (0..n)
        .map(|_| (0..dim).map(|_| (rng.gen::<f64>() * 1e4).round() / 1e4).collect())
        .collect();
    let c = PointCloud::from_f64(dim, &rows).ok()?;
    check_general_position(&c).is_certified().then_some(c)
}

fn critical_grades(c: &BigradedComplex, max_k: usize) -> Vec<Bigrade> {
    c.radii()
        .iter()
        .flat_map(|r| (1..=max_k).map(move |k| Bigrade::new(r.clone(), k)))
        .collect()
}

fn alternating(v: &[usize]) -> i64 {
    v.iter()
        .enumerate()
        .map(|(i, &x)| if i % 2 == 0 { x as i64 } else { -(x as i64) })
        .sum()
}

/// Vertex sets of the cells alive at `g` that are not a facet of another
/// alive cell.
fn maximal_cells(c: &BigradedComplex, g: &Bigrade) -> BTreeSet<Vec<Vec<u32>>> {
    let alive = c.alive_at(g);
    let mut covered = vec![false; c.len()];
    for &id in &alive {
        for &b in &c.cell(id).boundary {
            covered[b as usize] = true;
        }
    }
    alive
        .into_iter()
        .filter(|&id| !covered[id])
        .map(|id| c.vertex_key(id).into_iter().cloned().collect())
        .collect()
}

fn binomial(n: usize, k: usize) -> usize {
    (0..k).fold(1, |acc, i| acc * (n - i) / (i + 1))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn models_are_graded_chain_complexes(dim in 1usize..=2, extra in 1usize..5, seed in any::<u64>()) {
        let n = dim + extra;
        let Some(c) = cloud(dim, n, seed) else { return Ok(()) };
        let t = enumerate_rhomboids(&c).unwrap();
        let st = slice_tiling(&t).unwrap();
        for m in [build_rhomb(&t), build_srhomb(&st), build_sdel(&st)] {
            m.validate().unwrap();
            let top = m.top_dim().unwrap_or(0);
            let dims: Vec<usize> = (0..=top).collect();
            for g in critical_grades(&m, n) {
                let alive: BTreeSet<usize> = m.alive_at(&g).into_iter().collect();
                for &id in &alive {
                    prop_assert!(m.cell(id).boundary.iter().all(|b| alive.contains(&(*b as usize))));
                }
                let f = m.f_vector_at(&g);
                let b = betti_numbers_at(&m, &g, &dims);
                prop_assert_eq!(alternating(&f), alternating(&b), "{:?} at {:?}", m.model(), g);
                for i in dim..=top {
                    prop_assert_eq!(b[i], 0, "{:?} betti_{} at {:?}", m.model(), i, g);
                }
            }
        }
    }

    #[test]
    fn sliced_cells_embed_into_sdel(dim in 1usize..=2, extra in 1usize..5, seed in any::<u64>()) {
        let n = dim + extra;
        let Some(c) = cloud(dim, n, seed) else { return Ok(()) };
        let t = enumerate_rhomboids(&c).unwrap();
        let st = slice_tiling(&t).unwrap();
        let srhomb = build_srhomb(&st);
        let sdel = build_sdel(&st);

        // Injective on vertex sets, and each image is present by the cell's
        // own grade.
        let mut seen = BTreeSet::new();
        for id in 0..srhomb.len() {
            let key: Vec<Vec<u32>> = srhomb.vertex_key(id).into_iter().cloned().collect();
            prop_assert!(seen.insert(key.clone()));
            let g = &srhomb.bigrades(id)[0];
            let found = (0..sdel.len()).find(|&s| {
                sdel.vertex_key(s).into_iter().cloned().collect::<Vec<_>>() == key
            });
            let s = found.expect("sliced cell has no simplex");
            prop_assert!(sdel.bigrades(s).iter().any(|h| h.le(g)));
        }

        for g in critical_grades(&srhomb, n) {
            prop_assert_eq!(maximal_cells(&srhomb, &g), maximal_cells(&sdel, &g), "at {:?}", g);
        }
    }

    #[test]
    fn sdel_corners_are_adjacent_layers(dim in 1usize..=2, extra in 1usize..5, seed in any::<u64>()) {
        let Some(c) = cloud(dim, dim + extra, seed) else { return Ok(()) };
        let t = enumerate_rhomboids(&c).unwrap();
        let sdel = build_sdel(&slice_tiling(&t).unwrap());
        for id in 0..sdel.len() {
            let g = sdel.bigrades(id);
            prop_assert!(!g.is_empty() && g.len() <= 2);
            if let [a, b] = &g[..] {
                prop_assert_eq!(a.k.abs_diff(b.k), 1);
            }
        }
    }

    #[test]
    fn size_inequalities(dim in 1usize..=3, extra in 1usize..6, seed in any::<u64>()) {
        let n = dim + extra;
        let Some(c) = cloud(dim, n, seed) else { return Ok(()) };
        let t = enumerate_rhomboids(&c).unwrap();
        let st = slice_tiling(&t).unwrap();
        let stats = tiling_stats(&t);
        prop_assert!(stats.total_cells <= 2 * (n + 1).pow(dim as u32 + 1));
        prop_assert_eq!(stats.top_cells, binomial(n, dim + 1));
        let mid = binomial(dim + 1, dim.div_ceil(2));
        let v = |k: usize| stats.v_k.get(k).copied().unwrap_or(0);
        let cells: Vec<(SlicedKind, usize, BTreeSet<Vec<u32>>)> = (0..st.len())
            .map(|id| (st.cell(id).kind, st.cell(id).depth_hi, st.vertex_set(id).into_iter().collect()))
            .collect();
        for (kind, depth, verts) in &cells {
            prop_assert!(verts.len() - 1 <= 2 * mid);
            if !matches!(kind, SlicedKind::Slab(_)) {
                prop_assert!(verts.len() - 1 <= mid, "depth {} cell of dimension {}", depth, verts.len() - 1);
            }
        }
        for k in 1..n {
            let layer: Vec<&BTreeSet<Vec<u32>>> = cells
                .iter()
                .filter(|(kind, d, _)| *d == k + 1 || (*d == k && !matches!(kind, SlicedKind::Slab(_))))
                .map(|c| &c.2)
                .collect();
            let maximal = layer
                .iter()
                .filter(|a| !layer.iter().any(|b| b.len() > a.len() && a.is_subset(b)))
                .count();
            prop_assert!(maximal <= v(k) + v(k + 1), "layer {}: {} > {} + {}", k, maximal, v(k), v(k + 1));
        }
    }

    #[test]
    fn truncations_agree_below_the_cap(dim in 1usize..=2, extra in 2usize..5, cap in 1usize..4, seed in any::<u64>()) {
        let n = dim + extra;
        let Some(c) = cloud(dim, n, seed) else { return Ok(()) };
        let full = build_rhomb(&enumerate_rhomboids(&c).unwrap());
        let t = enumerate_truncated(&c, cap + dim).unwrap();
        let st = slice_tiling(&t).unwrap();
        let rhomb = build_rhomb(&t);
        let rhomb_cut = rhomb.truncate(cap).unwrap();
        let restricted = rhomb.restrict_depth(cap).unwrap();
        prop_assert!(restricted.max_grade_depth() <= cap);
        let srhomb = build_srhomb(&st).truncate(cap).unwrap();
        let sdel = build_sdel(&st).truncate(cap).unwrap();
        for g in critical_grades(&full, cap.min(n)) {
            let want = betti_numbers_at(&full, &g, &[0, 1]);
            prop_assert_eq!(&want, &betti_numbers_at(&rhomb, &g, &[0, 1]), "rhomb at {:?}", g);
            prop_assert_eq!(&want, &betti_numbers_at(&restricted, &g, &[0, 1]), "restricted rhomb at {:?}", g);
            prop_assert_eq!(&want, &betti_numbers_at(&srhomb, &g, &[0, 1]), "srhomb at {:?}", g);
            prop_assert_eq!(&want, &betti_numbers_at(&sdel, &g, &[0, 1]), "sdel at {:?}", g);
            if g.k + dim <= cap {
                prop_assert_eq!(&want, &betti_numbers_at(&rhomb_cut, &g, &[0, 1]), "cut rhomb at {:?}", g);
            }
        }
    }

    #[test]
    fn snapping_matches_the_grid(extra in 1usize..5, points in 2usize..12, seed in any::<u64>()) {
        let n = 2 + extra;
        let Some(c) = cloud(2, n, seed) else { return Ok(()) };
        let rhomb = build_rhomb(&enumerate_rhomboids(&c).unwrap());
        let snapped = rhomb.snap_grades(points).unwrap();
        snapped.validate().unwrap();
        let grid = snapped.snap_grid().unwrap().clone();
        for id in 0..rhomb.len() {
            let (before, after) = (&rhomb.bigrades(id)[0], &snapped.bigrades(id)[0]);
            prop_assert!(before.r <= after.r && before.k == after.k);
        }
        for j in 0..points {
            for k in 1..=n {
                let g = Bigrade::new(grid.value(j), k);
                prop_assert_eq!(betti_numbers_at(&rhomb, &g, &[0, 1]), betti_numbers_at(&snapped, &g, &[0, 1]));
            }
        }
    }

    #[test]
    fn barcodes_count_betti_numbers(dim in 1usize..=2, extra in 1usize..5, seed in any::<u64>()) {
        let n = dim + extra;
        let Some(c) = cloud(dim, n, seed) else { return Ok(()) };
        let rhomb = build_rhomb(&enumerate_rhomboids(&c).unwrap());
        for k in 1..=n {
            for i in 0..2 {
                let b = barcode_fixed_k(&rhomb, k, i);
                for r in rhomb.radii() {
                    prop_assert_eq!(b.rank_at(r), betti_at_grade(&rhomb, &Bigrade::new(r.clone(), k), i));
                }
            }
        }
    }

    #[test]
    fn oracle_radii_grow_along_faces(extra in 1usize..4, k in 1usize..4, seed in any::<u64>()) {
        let n = 2 + extra;
        let Some(c) = cloud(2, n, seed) else { return Ok(()) };
        let k = k.min(n);
        let nerve = cech_multicover_nerve(&c, k, 2).unwrap();
        prop_assert_eq!(nerve.vertices.len(), binomial(n, k));
        let radius: std::collections::BTreeMap<&[u32], &Rational> =
            nerve.simplices.iter().map(|s| (s.vertices.as_slice(), &s.r_sq)).collect();
        for s in &nerve.simplices {
            for skip in 0..s.vertices.len() {
                if s.vertices.len() == 1 {
                    break;
                }
                let mut f = s.vertices.clone();
                f.remove(skip);
                prop_assert!(radius[f.as_slice()] <= &s.r_sq);
            }
        }
    }
}

/// Keeping only cells whose vertices all lie at depth at most 2 loses the
/// triangle's interior at depth 1: the six depth-1 and depth-2 vertices form
/// a hexagon.
#[test]
fn rhomb_cut_at_the_cap_is_only_faithful_lower_down() {
    let c = PointCloud::from_integers(2, &[&[0, 0], &[4, 0], &[1, 3]]).unwrap();
    let full = build_rhomb(&enumerate_rhomboids(&c).unwrap());
    let cut = full.truncate(2).unwrap();
    let top = full.radii().last().unwrap().clone();
    let g = Bigrade::new(top, 1);
    assert_eq!(betti_numbers_at(&full, &g, &[0, 1]), vec![1, 0]);
    assert_eq!(betti_numbers_at(&cut, &g, &[0, 1]), vec![1, 1]);

    // Enumerating two levels deeper and keeping every cell is faithful.
    let deeper = build_rhomb(&enumerate_truncated(&c, 2 + 2).unwrap());
    assert_eq!(betti_numbers_at(&deeper, &g, &[0, 1]), vec![1, 0]);
}

/// On random clouds the second S-Del corner never materializes: the depth
/// slices of a cell are always at least as early as any slab containing
/// them.
#[test]
fn sdel_grades_are_single_on_random_clouds() {
    let mut checked = 0;
    for seed in 0..40 {
        for dim in 1..=2 {
            let Some(c) = cloud(dim, 6, seed) else { continue };
            let sdel = build_sdel(&slice_tiling(&enumerate_rhomboids(&c).unwrap()).unwrap());
            assert!(sdel.cells().iter().all(|cell| cell.grades.len() == 1), "seed {seed} dim {dim}");
            checked += 1;
        }
    }
    assert!(checked >= 60);
}
