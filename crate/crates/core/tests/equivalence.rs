use multicover::bifiltration::{build_rhomb, build_sdel_up_to, build_srhomb, Bigrade, BigradedComplex};
use multicover::homology::{barcode_fixed_k, betti_numbers_at};
use multicover::oracle::cech_multicover_nerve;
use multicover::tiling::{enumerate_rhomboids, slice_tiling};
use multicover::{PointCloud, Rational};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn cloud(dim: usize, n: usize, seed: u64) -> PointCloud {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let rows: Vec<Vec<f64>> = (0..n)
        .map(|_| (0..dim).map(|_| (rng.gen::<f64>() * 1e3).round() / 1e3).collect())
        .collect();
    PointCloud::from_f64(dim, &rows).unwrap()
}

fn grades(models: &[&BigradedComplex], n: usize) -> Vec<Bigrade> {
    let mut radii: Vec<Rational> = models.iter().flat_map(|c| c.radii().to_vec()).collect();
    radii.sort();
    radii.dedup();
    let mut out = Vec::new();
    for w in radii.windows(2) {
        let mid = (&w[0] + &w[1]) / Rational::from_integer(2.into());
        for r in [w[0].clone(), mid] {
            for k in 1..=n {
                out.push(Bigrade::new(r.clone(), k));
            }
        }
    }
    out
}

#[test]
fn models_agree_with_the_oracle() {
    for (dim, n, seed) in [(1, 5, 1), (2, 5, 2), (2, 6, 3), (2, 7, 4), (3, 6, 5)] {
        let c = cloud(dim, n, seed);
        let t = enumerate_rhomboids(&c).unwrap();
        let st = slice_tiling(&t).unwrap();
        let rhomb = build_rhomb(&t);
        let srhomb = build_srhomb(&st);
        let sdel = build_sdel_up_to(&st, Some(dim + 1));
        for k in 1..=n {
            let nerve = cech_multicover_nerve(&c, k, 2).unwrap().to_complex();
            for i in 0..2 {
                let b = barcode_fixed_k(&rhomb, k, i);
                assert_eq!(b, barcode_fixed_k(&nerve, k, i), "barcode dim={dim} n={n} k={k} i={i}");
                assert_eq!(b, barcode_fixed_k(&srhomb, k, i));
                assert_eq!(b, barcode_fixed_k(&sdel, k, i));
            }
        }
        for g in grades(&[&rhomb], n) {
            let want = betti_numbers_at(&rhomb, &g, &[0, 1]);
            assert_eq!(want, betti_numbers_at(&srhomb, &g, &[0, 1]), "srhomb {g:?}");
            assert_eq!(want, betti_numbers_at(&sdel, &g, &[0, 1]), "sdel {g:?}");
        }
    }
}

#[test]
fn truncation_probe() {
    use multicover::tiling::enumerate_truncated;
    for (dim, n, seed) in [(1, 7, 11), (2, 7, 12), (2, 8, 13), (3, 7, 14)] {
        let c = cloud(dim, n, seed);
        let full_t = enumerate_rhomboids(&c).unwrap();
        let full = build_rhomb(&full_t);
        let fst = slice_tiling(&full_t).unwrap();
        let sdel_full = build_sdel_up_to(&fst, Some(dim + 1));
        assert!(sdel_full.cells().iter().all(|cell| cell.grades.len() == 1));
        for kk in 1..n {
            let t = enumerate_truncated(&c, kk + dim).unwrap();
            let st = slice_tiling(&t).unwrap();
            let rh = build_rhomb(&t);
            let rh_trunc = rh.truncate(kk).unwrap();
            let sr = build_srhomb(&st).truncate(kk).unwrap();
            let sd = build_sdel_up_to(&st, Some(dim + 1)).truncate(kk).unwrap();
            for g in grades(&[&full], n) {
                if g.k > kk { continue; }
                let want = betti_numbers_at(&full, &g, &[0, 1]);
                assert_eq!(want, betti_numbers_at(&rh, &g, &[0, 1]), "rhomb cap dim={dim} K={kk} {g:?}");
                assert_eq!(want, betti_numbers_at(&sr, &g, &[0, 1]), "srhomb dim={dim} K={kk} {g:?}");
                assert_eq!(want, betti_numbers_at(&sd, &g, &[0, 1]), "sdel dim={dim} K={kk} {g:?}");
                if g.k + dim <= kk {
                    assert_eq!(want, betti_numbers_at(&rh_trunc, &g, &[0, 1]), "rhomb trunc dim={dim} K={kk} {g:?}");
                }
            }
        }
    }
}
