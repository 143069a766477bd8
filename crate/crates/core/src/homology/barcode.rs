use std::fmt;

use rustc_hash::FxHashMap;

use super::matrix::Gf2Matrix;
use crate::bifiltration::BigradedComplex;
use crate::scalar::{format_rational, Rational};

/// A persistence interval with squared-radius endpoints; `death` is `None`
/// for an essential class.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Bar {
    pub dim: usize,
    pub birth: Rational,
    pub death: Option<Rational>,
}

impl fmt::Display for Bar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} [{}, ", self.dim, format_rational(&self.birth))?;
        match &self.death {
            Some(d) => write!(f, "{})", format_rational(d)),
            None => f.write_str("inf)"),
        }
    }
}

/// A multiset of bars kept in canonical order, so equality is multiset
/// equality.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Barcode {
    bars: Vec<Bar>,
}

impl Barcode {
    pub fn new(mut bars: Vec<Bar>) -> Self {
        bars.sort_by(|a, b| {
            (a.dim, &a.birth, a.death.is_none(), &a.death).cmp(&(
                b.dim,
                &b.birth,
                b.death.is_none(),
                &b.death,
            ))
        });
        Barcode { bars }
    }

    pub fn bars(&self) -> &[Bar] {
        &self.bars
    }

    pub fn len(&self) -> usize {
        self.bars.len()
    }

    pub fn is_empty(&self) -> bool {
        self.bars.is_empty()
    }

    /// Number of bars alive at squared radius `r`.
    pub fn rank_at(&self, r: &Rational) -> usize {
        self.bars
            .iter()
            .filter(|b| b.birth <= *r && b.death.as_ref().is_none_or(|d| r < d))
            .count()
    }
}

/// Persistence of degree-`i` homology along the radius, with the depth
/// fixed at `k`. Cells entering at the same radius are ordered by
/// dimension and then by their sorted vertex sets. Zero-length bars are
/// dropped.
pub fn barcode_fixed_k(c: &BigradedComplex, k: usize, i: usize) -> Barcode {
    let mut order: Vec<(u32, usize)> = c
        .cells()
        .iter()
        .enumerate()
        .filter(|(_, cell)| cell.dim <= i + 1)
        .filter_map(|(id, cell)| cell.entry_at(k).map(|r| (r, id)))
        .collect();
    order.sort_by(|a, b| {
        let (ca, cb) = (c.cell(a.1), c.cell(b.1));
        (a.0, ca.dim, &ca.vertices, a.1).cmp(&(b.0, cb.dim, &cb.vertices, b.1))
    });
    let pos: FxHashMap<usize, u32> = order
        .iter()
        .enumerate()
        .map(|(p, &(_, id))| (id, p as u32))
        .collect();
    let entry = |p: u32| order[p as usize].0;

    let columns_of = |dim: usize| -> (Vec<u32>, Gf2Matrix) {
        let (positions, cols): (Vec<u32>, Vec<Vec<u32>>) = order
            .iter()
            .enumerate()
            .filter(|(_, &(_, id))| c.cell(id).dim == dim)
            .map(|(p, &(_, id))| {
                let col = c.cell(id).boundary.iter().map(|b| pos[&(*b as usize)]).collect();
                (p as u32, col)
            })
            .unzip();
        (positions, Gf2Matrix::new(cols))
    };

    // An i-cell creates a class when its reduced boundary vanishes.
    let (low_pos, low_m) = columns_of(i);
    let low = low_m.reduce();
    let mut creators: Vec<u32> = if i == 0 {
        low_pos.clone()
    } else {
        low_pos
            .iter()
            .zip(&low.columns)
            .filter(|(_, col)| col.is_empty())
            .map(|(&p, _)| p)
            .collect()
    };
    creators.sort_unstable();

    let (high_pos, high_m) = columns_of(i + 1);
    let high = high_m.reduce();
    let mut killed: FxHashMap<u32, u32> = FxHashMap::default();
    for (j, col) in high.columns.iter().enumerate() {
        if let Some(&l) = col.last() {
            killed.insert(l, high_pos[j]);
        }
    }

    let bars = creators
        .into_iter()
        .filter_map(|p| {
            let birth = entry(p);
            let death = killed.get(&p).map(|&q| entry(q));
            if death == Some(birth) {
                return None;
            }
            Some(Bar {
                dim: i,
                birth: c.radius(birth).clone(),
                death: death.map(|d| c.radius(d).clone()),
            })
        })
        .collect();
    Barcode::new(bars)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bifiltration::{build_rhomb, Bigrade};
    use crate::geom::PointCloud;
    use crate::homology::betti_at_grade;
    use crate::tiling::enumerate_rhomboids;

    fn r(n: i64) -> Rational {
        Rational::from_integer(n.into())
    }

    #[test]
    fn two_sites() {
        let t = enumerate_rhomboids(&PointCloud::from_integers(1, &[&[0], &[2]]).unwrap()).unwrap();
        let c = build_rhomb(&t);
        let b = barcode_fixed_k(&c, 1, 0);
        let expect = Barcode::new(vec![
            Bar { dim: 0, birth: r(0), death: None },
            Bar { dim: 0, birth: r(0), death: Some(r(1)) },
        ]);
        assert_eq!(b, expect);
        assert_eq!(
            barcode_fixed_k(&c, 2, 0),
            Barcode::new(vec![Bar { dim: 0, birth: r(1), death: None }])
        );
        assert!(barcode_fixed_k(&c, 3, 0).is_empty());
        assert!(barcode_fixed_k(&c, 1, 1).is_empty());
    }

    #[test]
    fn ranks_match_betti() {
        let t = enumerate_rhomboids(
            &PointCloud::from_integers(2, &[&[0, 0], &[7, 1], &[3, 6], &[9, 8], &[-2, 5]]).unwrap(),
        )
        .unwrap();
        let c = build_rhomb(&t);
        for k in 1..=5 {
            for i in 0..2 {
                let b = barcode_fixed_k(&c, k, i);
                for rr in c.radii() {
                    assert_eq!(b.rank_at(rr), betti_at_grade(&c, &Bigrade::new(rr.clone(), k), i));
                }
            }
        }
    }
}
