use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::One;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::GeomError;
use crate::scalar::{parse_decimal, Filtered, Rational, Scalar};

/// The input sites, stored exactly and as filtered `f64` approximations.
///
/// Construction checks only the dimension and coordinate counts. Distinctness
/// and general position are reported by [`super::check_general_position`] and
/// enforced by tiling enumeration.
#[derive(Clone, Debug)]
pub struct PointCloud {
    dim: usize,
    sites: Vec<Vec<Rational>>,
    approx: Vec<Vec<Filtered>>,
    /// Sites times `scale`, the least common denominator of all coordinates.
    ints: Vec<Vec<BigInt>>,
    scale: BigInt,
}

impl PartialEq for PointCloud {
    fn eq(&self, other: &Self) -> bool {
        self.dim == other.dim && self.sites == other.sites
    }
}

impl PointCloud {
    pub fn new(dim: usize, sites: Vec<Vec<Rational>>) -> Result<Self, GeomError> {
        if !(1..=3).contains(&dim) {
            return Err(GeomError::UnsupportedDimension(dim));
        }
        if let Some(bad) = sites.iter().find(|p| p.len() != dim) {
            return Err(GeomError::DimensionMismatch {
                expected: dim,
                found: bad.len(),
            });
        }
        let approx = sites
            .iter()
            .map(|p| p.iter().map(Filtered::from_rational).collect())
            .collect();
        let scale = sites
            .iter()
            .flatten()
            .fold(BigInt::one(), |l, x| l.lcm(x.denom()));
        let ints = sites
            .iter()
            .map(|p| p.iter().map(|x| (x * &scale).to_integer()).collect())
            .collect();
        Ok(PointCloud {
            dim,
            sites,
            approx,
            ints,
            scale,
        })
    }

    /// Build from decimal strings, e.g. `&[&["0", "0.5"], &["1", "2"]]`.
    pub fn from_decimals(dim: usize, rows: &[&[&str]]) -> Result<Self, GeomError> {
        let sites = rows
            .iter()
            .map(|row| {
                row.iter()
                    .map(|s| {
                        parse_decimal(s)
                            .ok_or_else(|| GeomError::Degenerate(format!("bad decimal {s:?}")))
                    })
                    .collect::<Result<Vec<_>, _>>()
            })
            .collect::<Result<Vec<_>, _>>()?;
        Self::new(dim, sites)
    }

    /// Build from small integer coordinates.
    pub fn from_integers(dim: usize, rows: &[&[i64]]) -> Result<Self, GeomError> {
        let sites = rows
            .iter()
            .map(|row| row.iter().map(|&x| Rational::from_i64(x)).collect())
            .collect();
        Self::new(dim, sites)
    }

    /// Build from `f64` coordinates; every finite double converts exactly.
    pub fn from_f64(dim: usize, rows: &[Vec<f64>]) -> Result<Self, GeomError> {
        let sites = rows
            .iter()
            .map(|row| {
                row.iter()
                    .map(|&x| {
                        Rational::from_float(x)
                            .ok_or_else(|| GeomError::Degenerate(format!("non-finite coordinate {x}")))
                    })
                    .collect::<Result<Vec<_>, _>>()
            })
            .collect::<Result<Vec<_>, _>>()?;
        Self::new(dim, sites)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn n(&self) -> usize {
        self.sites.len()
    }

    pub fn is_empty(&self) -> bool {
        self.sites.is_empty()
    }

    pub fn site(&self, i: usize) -> &[Rational] {
        &self.sites[i]
    }

    pub fn sites(&self) -> &[Vec<Rational>] {
        &self.sites
    }

    pub(crate) fn approx(&self, i: usize) -> &[Filtered] {
        &self.approx[i]
    }

    /// Site `i` scaled to integer coordinates.
    pub(crate) fn int_site(&self, i: usize) -> &[BigInt] {
        &self.ints[i]
    }

    /// Common denominator of the coordinates.
    pub(crate) fn scale(&self) -> &BigInt {
        &self.scale
    }

    pub fn site_f64(&self, i: usize) -> Vec<f64> {
        self.approx[i].iter().map(|x| x.v).collect()
    }

    /// Sites converted into another scalar type.
    pub fn sites_as<T: Scalar>(&self) -> Vec<Vec<T>> {
        self.sites
            .iter()
            .map(|p| p.iter().map(T::from_rational).collect())
            .collect()
    }

    pub(crate) fn check_index(&self, i: usize) -> Result<(), GeomError> {
        if i < self.n() {
            Ok(())
        } else {
            Err(GeomError::SiteOutOfRange {
                index: i,
                n: self.n(),
            })
        }
    }

    /// A copy with every coordinate moved by an independent uniform offset in
    /// `[-magnitude, magnitude]`, rounded to `decimals` places.
    pub fn jittered(&self, magnitude: f64, decimals: u32, seed: u64) -> PointCloud {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let scale = Rational::from_i64(10i64.pow(decimals));
        let sites = self
            .sites
            .iter()
            .map(|p| {
                p.iter()
                    .map(|x| {
                        let offset = rng.gen_range(-magnitude..=magnitude);
                        let units = (offset * 10f64.powi(decimals as i32)).round() as i64;
                        x + Rational::from_i64(units) / &scale
                    })
                    .collect()
            })
            .collect();
        PointCloud::new(self.dim, sites).expect("jitter keeps the dimension")
    }

    /// Squared diameter bound used to scale radius grids: the squared radius of
    /// the minimum enclosing ball.
    pub fn meb_radius_sq(&self) -> Result<Rational, GeomError> {
        Ok(super::miniball(&self.sites)?.radius_sq)
    }
}
