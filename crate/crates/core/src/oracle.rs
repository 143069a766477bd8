//! Brute-force ground truth: the nerve of the cover of the `k`-fold cover by
//! intersections of `k` balls.
//!
//! Radius-`r` balls around the sites of `A_0 ∪ … ∪ A_j` have a common point
//! exactly when the minimum enclosing ball of that union has radius at most
//! `r`, so every critical radius is one miniball computation.

use itertools::Itertools;
use rustc_hash::FxHashMap;
use thiserror::Error;

use crate::bifiltration::{
    radius_index, radius_table, Bigrade, BigradedComplex, Cell, Grade, Model,
};
use crate::geom::{miniball, GeomError, PointCloud};
use crate::homology::{barcode_fixed_k, betti_at_grade, Barcode};
use crate::scalar::Rational;
use crate::tiling::SiteSet;

#[derive(Debug, Error)]
pub enum OracleError {
    #[error(transparent)]
    Geom(#[from] GeomError),
    #[error("depth {k} is outside 1..={n}")]
    KOutOfRange { k: usize, n: usize },
    #[error("the oracle is limited to {max} sites, got {n}")]
    TooManySites { n: usize, max: usize },
    #[error("H_{degree} needs simplices of dimension {needed}, the nerve stops at {max_dim}")]
    InsufficientDim {
        degree: usize,
        needed: usize,
        max_dim: usize,
    },
}

/// Limits on the brute-force construction.
#[derive(Clone, Copy, Debug)]
pub struct OracleOptions {
    pub max_sites: usize,
}

impl Default for OracleOptions {
    fn default() -> Self {
        OracleOptions { max_sites: 12 }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OracleSimplex {
    /// Sorted indices into the vertex list.
    pub vertices: Vec<u32>,
    /// Squared radius of the smallest ball around the union of the
    /// vertices' site sets.
    pub r_sq: Rational,
}

/// The nerve at a fixed depth `k`: one vertex per `k`-subset of sites and
/// simplices up to dimension `max_dim`.
#[derive(Clone, Debug)]
pub struct CechMulticoverComplex {
    pub k: usize,
    pub max_dim: usize,
    /// The `k`-subsets, in lexicographic order.
    pub vertices: Vec<SiteSet>,
    /// Ordered by dimension, then lexicographically.
    pub simplices: Vec<OracleSimplex>,
}

pub fn cech_multicover_nerve(
    cloud: &PointCloud,
    k: usize,
    max_dim: usize,
) -> Result<CechMulticoverComplex, OracleError> {
    cech_multicover_nerve_with(cloud, k, max_dim, OracleOptions::default())
}

pub fn cech_multicover_nerve_with(
    cloud: &PointCloud,
    k: usize,
    max_dim: usize,
    options: OracleOptions,
) -> Result<CechMulticoverComplex, OracleError> {
    let n = cloud.n();
    if n > options.max_sites.min(64) {
        return Err(OracleError::TooManySites {
            n,
            max: options.max_sites.min(64),
        });
    }
    if k < 1 || k > n {
        return Err(OracleError::KOutOfRange { k, n });
    }
    let vertices: Vec<SiteSet> = (0..n as u32).combinations(k).collect();
    let masks: Vec<u64> = vertices
        .iter()
        .map(|s| s.iter().fold(0u64, |m, &i| m | 1 << i))
        .collect();

    let mut meb: FxHashMap<u64, Rational> = FxHashMap::default();
    let mut radius = |mask: u64| -> Result<Rational, GeomError> {
        if let Some(r) = meb.get(&mask) {
            return Ok(r.clone());
        }
        let points: Vec<Vec<Rational>> = (0..n)
            .filter(|&i| mask >> i & 1 == 1)
            .map(|i| cloud.site(i).to_vec())
            .collect();
        let r = miniball(&points)?.radius_sq;
        meb.insert(mask, r.clone());
        Ok(r)
    };

    let mut simplices = Vec::new();
    for size in 1..=max_dim + 1 {
        for combo in (0..vertices.len() as u32).combinations(size) {
            let mask = combo.iter().fold(0u64, |m, &v| m | masks[v as usize]);
            simplices.push(OracleSimplex {
                r_sq: radius(mask)?,
                vertices: combo,
            });
        }
    }
    Ok(CechMulticoverComplex {
        k,
        max_dim,
        vertices,
        simplices,
    })
}

impl CechMulticoverComplex {
    /// The nerve as a bigraded complex living in the single layer `k`.
    pub fn to_complex(&self) -> BigradedComplex {
        let radii = radius_table(self.simplices.iter().map(|s| &s.r_sq));
        let index: FxHashMap<&[u32], u32> = self
            .simplices
            .iter()
            .enumerate()
            .map(|(i, s)| (s.vertices.as_slice(), i as u32))
            .collect();
        let cells = self
            .simplices
            .iter()
            .map(|s| {
                let boundary = if s.vertices.len() == 1 {
                    Vec::new()
                } else {
                    let mut b: Vec<u32> = (0..s.vertices.len())
                        .map(|skip| {
                            let f: Vec<u32> = s
                                .vertices
                                .iter()
                                .enumerate()
                                .filter(|&(i, _)| i != skip)
                                .map(|(_, &v)| v)
                                .collect();
                            index[f.as_slice()]
                        })
                        .collect();
                    b.sort_unstable();
                    b
                };
                Cell {
                    dim: s.vertices.len() - 1,
                    boundary,
                    grades: vec![Grade {
                        r: radius_index(&radii, &s.r_sq),
                        k: self.k as u32,
                    }],
                    depth_hi: self.k,
                    vertices: s.vertices.clone(),
                }
            })
            .collect();
        BigradedComplex::from_parts(Model::CechOracle, radii, self.vertices.clone(), cells)
    }

    fn check_degree(&self, i: usize) -> Result<(), OracleError> {
        if i + 1 > self.max_dim {
            return Err(OracleError::InsufficientDim {
                degree: i,
                needed: i + 1,
                max_dim: self.max_dim,
            });
        }
        Ok(())
    }

    /// `β_i` of the `k`-fold cover at squared radius `r_sq`.
    pub fn betti(&self, r_sq: &Rational, i: usize) -> Result<usize, OracleError> {
        self.check_degree(i)?;
        Ok(betti_at_grade(&self.to_complex(), &Bigrade::new(r_sq.clone(), self.k), i))
    }

    /// `β_i` at each of several squared radii, read off one barcode.
    pub fn betti_profile(&self, radii: &[Rational], i: usize) -> Result<Vec<usize>, OracleError> {
        let b = self.barcode(i)?;
        Ok(radii.iter().map(|r| b.rank_at(r)).collect())
    }

    /// Persistence of `H_i` of the `k`-fold cover along the radius.
    pub fn barcode(&self, i: usize) -> Result<Barcode, OracleError> {
        self.check_degree(i)?;
        Ok(barcode_fixed_k(&self.to_complex(), self.k, i))
    }
}

/// `β_i` of the `k`-fold cover at squared radius `r_sq`, from a nerve built
/// up to dimension `i + 1`.
pub fn oracle_betti(
    cloud: &PointCloud,
    r_sq: &Rational,
    k: usize,
    i: usize,
) -> Result<usize, OracleError> {
    cech_multicover_nerve(cloud, k, i + 1)?.betti(r_sq, i)
}

/// Barcode of `H_i` of the `k`-fold cover.
pub fn oracle_barcode(cloud: &PointCloud, k: usize, i: usize) -> Result<Barcode, OracleError> {
    cech_multicover_nerve(cloud, k, i + 1)?.barcode(i)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::homology::Bar;

    fn r(n: i64) -> Rational {
        Rational::from_integer(n.into())
    }

    #[test]
    fn two_sites() {
        let cloud = PointCloud::from_integers(1, &[&[0], &[2]]).unwrap();
        let top = cech_multicover_nerve(&cloud, 2, 1).unwrap();
        assert_eq!(top.simplices, vec![OracleSimplex { vertices: vec![0], r_sq: r(1) }]);
        let one = cech_multicover_nerve(&cloud, 1, 1).unwrap();
        let radii: Vec<_> = one.simplices.iter().map(|s| s.r_sq.clone()).collect();
        assert_eq!(radii, vec![r(0), r(0), r(1)]);
        assert_eq!(
            oracle_barcode(&cloud, 1, 0).unwrap(),
            Barcode::new(vec![
                Bar { dim: 0, birth: r(0), death: None },
                Bar { dim: 0, birth: r(0), death: Some(r(1)) },
            ])
        );
        assert_eq!(
            oracle_barcode(&cloud, 2, 0).unwrap(),
            Barcode::new(vec![Bar { dim: 0, birth: r(1), death: None }])
        );
    }

    #[test]
    fn right_triangle() {
        let cloud = PointCloud::from_integers(2, &[&[0, 0], &[2, 0], &[0, 2]]).unwrap();
        let nerve = cech_multicover_nerve(&cloud, 1, 2).unwrap();
        let edges: Vec<_> = nerve.simplices.iter().filter(|s| s.vertices.len() == 2).map(|s| s.r_sq.clone()).collect();
        assert_eq!(edges, vec![r(1), r(1), r(2)]);
        assert_eq!(nerve.simplices.last().unwrap().r_sq, r(2));
        nerve.to_complex().validate().unwrap();
        assert_eq!(oracle_betti(&cloud, &r(0), 1, 0).unwrap(), 3);
    }

    #[test]
    fn errors() {
        let cloud = PointCloud::from_integers(1, &[&[0], &[2]]).unwrap();
        assert!(matches!(cech_multicover_nerve(&cloud, 3, 1), Err(OracleError::KOutOfRange { .. })));
        let nerve = cech_multicover_nerve(&cloud, 1, 1).unwrap();
        assert!(matches!(nerve.betti(&r(1), 1), Err(OracleError::InsufficientDim { .. })));
        let many: Vec<Vec<i64>> = (0..13).map(|i| vec![i]).collect();
        let rows: Vec<&[i64]> = many.iter().map(|v| v.as_slice()).collect();
        let big = PointCloud::from_integers(1, &rows).unwrap();
        assert!(matches!(cech_multicover_nerve(&big, 1, 1), Err(OracleError::TooManySites { .. })));
        assert!(cech_multicover_nerve_with(&big, 1, 1, OracleOptions { max_sites: 20 }).is_ok());
    }

    #[test]
    fn profile_matches_pointwise() {
        let cloud = PointCloud::from_integers(2, &[&[0, 0], &[5, 1], &[2, 6], &[7, 5], &[3, 3]]).unwrap();
        for k in 1..=3 {
            let nerve = cech_multicover_nerve(&cloud, k, 2).unwrap();
            let radii: Vec<Rational> = (0..30).map(|j| Rational::new(j.into(), 2.into())).collect();
            for i in 0..2 {
                let want: Vec<usize> = radii.iter().map(|r| nerve.betti(r, i).unwrap()).collect();
                assert_eq!(nerve.betti_profile(&radii, i).unwrap(), want);
            }
        }
    }
}
