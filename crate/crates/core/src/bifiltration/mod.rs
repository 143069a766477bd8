//! Bigraded GF(2) chain complexes for the rhomboid bifiltration, its sliced
//! variant and the simplicial S-Del model.

mod build;
mod firep;

use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use num_traits::{ToPrimitive, Zero};
use thiserror::Error;

use crate::scalar::Rational;
use crate::tiling::{SiteSet, TilingError};

pub use build::{build_rhomb, build_sdel, build_sdel_up_to, build_srhomb};
pub use firep::{assemble_firep, firep_eval, FirepDocument, FirepGenerator, FirepGrade};

#[derive(Debug, Error)]
pub enum BifiltrationError {
    #[error(transparent)]
    Tiling(#[from] TilingError),
    #[error("truncation depth must be at least 1")]
    InvalidTruncation,
    #[error("snapping needs at least 2 grid points, got {0}")]
    InvalidSnap(usize),
    #[error("model {0} is multi-critical and cannot be exported as a FIREP")]
    UnsupportedModel(Model),
    #[error("homology degree {degree} needs cells of dimension {needed}, top dimension is {top}")]
    DegreeOutOfRange {
        degree: usize,
        needed: usize,
        top: usize,
    },
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },
    #[error("invalid complex: {0}")]
    Invalid(String),
}

/// Which model a complex represents.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Model {
    Rhomb,
    SRhomb,
    SDel,
    CechOracle,
}

impl Model {
    /// Whether every cell has exactly one minimal grade.
    pub fn is_one_critical(self) -> bool {
        matches!(self, Model::Rhomb | Model::SRhomb)
    }
}

impl fmt::Display for Model {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Model::Rhomb => "rhomb",
            Model::SRhomb => "srhomb",
            Model::SDel => "sdel",
            Model::CechOracle => "cech-oracle",
        })
    }
}

impl FromStr for Model {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "rhomb" => Ok(Model::Rhomb),
            "srhomb" => Ok(Model::SRhomb),
            "sdel" => Ok(Model::SDel),
            "cech-oracle" => Ok(Model::CechOracle),
            _ => Err(format!("unknown model `{s}`")),
        }
    }
}

/// A bigrade `(r, k)` with `r` a squared radius.
///
/// `(r, k) <= (r', k')` when `r <= r'` and `k >= k'`: the cover grows with
/// the radius and shrinks with the depth.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Bigrade {
    pub r: Rational,
    pub k: usize,
}

impl Bigrade {
    pub fn new(r: Rational, k: usize) -> Self {
        Bigrade { r, k }
    }

    /// Squared radius `r * r` paired with `k`.
    pub fn from_radius(r: &Rational, k: usize) -> Self {
        Bigrade { r: r * r, k }
    }

    pub fn le(&self, other: &Bigrade) -> bool {
        self.r <= other.r && self.k >= other.k
    }
}

impl PartialOrd for Bigrade {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        match (self.le(other), other.le(self)) {
            (true, true) => Some(Ordering::Equal),
            (true, false) => Some(Ordering::Less),
            (false, true) => Some(Ordering::Greater),
            (false, false) => None,
        }
    }
}

/// A grade stored as an index into the complex's radius table.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Grade {
    pub r: u32,
    pub k: u32,
}

impl Grade {
    pub fn le(&self, other: &Grade) -> bool {
        self.r <= other.r && self.k >= other.k
    }
}

/// A cell of a bigraded complex.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Cell {
    pub dim: usize,
    /// Sorted ids of the facets; all smaller than the cell's own id.
    pub boundary: Vec<u32>,
    /// Minimal grades, pairwise incomparable.
    pub grades: Vec<Grade>,
    /// Largest vertex depth.
    pub depth_hi: usize,
    /// Sorted ids into the complex's vertex table.
    pub vertices: Vec<u32>,
}

impl Cell {
    /// Whether the cell is present at `(r_count, k)`, where `r_count` is the
    /// number of radius-table entries not exceeding the query radius.
    pub fn alive(&self, r_count: usize, k: usize) -> bool {
        self.grades
            .iter()
            .any(|g| (g.r as usize) < r_count && g.k as usize >= k)
    }

    /// Index of the smallest radius at which the cell is present in layer
    /// `k`, if it ever is.
    pub fn entry_at(&self, k: usize) -> Option<u32> {
        self.grades
            .iter()
            .filter(|g| g.k as usize >= k)
            .map(|g| g.r)
            .min()
    }
}

/// The radius grid a complex was snapped onto: `n` evenly spaced radii from
/// 0 to the radius with square `max_sq`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SnapGrid {
    pub n: usize,
    pub max_sq: Rational,
}

impl SnapGrid {
    /// Squared radius of grid point `j`.
    pub fn value(&self, j: usize) -> Rational {
        let steps = (self.n - 1) as i64;
        &self.max_sq * Rational::new(((j * j) as i64).into(), (steps * steps).into())
    }

    /// Smallest grid index whose radius is at least `sqrt(r_sq)`.
    pub fn ceil_index(&self, r_sq: &Rational) -> usize {
        if self.max_sq.is_zero() || r_sq.is_zero() {
            return 0;
        }
        let steps = (self.n - 1) as f64;
        let ratio = (r_sq / &self.max_sq).to_f64().unwrap_or(1.0).max(0.0);
        let mut j = ((ratio.sqrt() * steps).ceil() as usize).min(self.n - 1);
        while j > 0 && self.value(j - 1) >= *r_sq {
            j -= 1;
        }
        while j < self.n - 1 && self.value(j) < *r_sq {
            j += 1;
        }
        j
    }
}

/// A finite cell complex over GF(2) whose cells carry sets of minimal
/// bigrades. Cells are ordered by dimension, so facets come first.
#[derive(Clone, Debug)]
pub struct BigradedComplex {
    model: Model,
    radii: Vec<Rational>,
    snap: Option<SnapGrid>,
    vertex_sets: Vec<SiteSet>,
    cells: Vec<Cell>,
}

impl BigradedComplex {
    /// Assemble a complex. `radii` must be sorted and distinct; cells must be
    /// sorted by dimension with boundaries referring to earlier cells.
    pub fn new(
        model: Model,
        radii: Vec<Rational>,
        vertex_sets: Vec<SiteSet>,
        cells: Vec<Cell>,
    ) -> Result<Self, BifiltrationError> {
        let c = BigradedComplex {
            model,
            radii,
            snap: None,
            vertex_sets,
            cells,
        };
        c.check_structure()?;
        Ok(c)
    }

    pub(crate) fn from_parts(
        model: Model,
        radii: Vec<Rational>,
        vertex_sets: Vec<SiteSet>,
        cells: Vec<Cell>,
    ) -> Self {
        let c = BigradedComplex {
            model,
            radii,
            snap: None,
            vertex_sets,
            cells,
        };
        debug_assert!(c.check_structure().is_ok(), "{:?}", c.check_structure());
        c
    }

    pub fn model(&self) -> Model {
        self.model
    }

    pub fn radii(&self) -> &[Rational] {
        &self.radii
    }

    pub fn radius(&self, idx: u32) -> &Rational {
        &self.radii[idx as usize]
    }

    pub fn snap_grid(&self) -> Option<&SnapGrid> {
        self.snap.as_ref()
    }

    pub fn vertex_sets(&self) -> &[SiteSet] {
        &self.vertex_sets
    }

    pub fn cells(&self) -> &[Cell] {
        &self.cells
    }

    pub fn cell(&self, id: usize) -> &Cell {
        &self.cells[id]
    }

    pub fn len(&self) -> usize {
        self.cells.len()
    }

    pub fn is_empty(&self) -> bool {
        self.cells.is_empty()
    }

    pub fn top_dim(&self) -> Option<usize> {
        self.cells.last().map(|c| c.dim)
    }

    /// Largest vertex depth of any cell.
    pub fn max_depth(&self) -> usize {
        self.cells.iter().map(|c| c.depth_hi).max().unwrap_or(0)
    }

    /// The minimal grades of a cell as bigrades.
    pub fn bigrades(&self, id: usize) -> Vec<Bigrade> {
        self.cells[id]
            .grades
            .iter()
            .map(|g| Bigrade::new(self.radius(g.r).clone(), g.k as usize))
            .collect()
    }

    /// Number of radius-table entries at most `r_sq`.
    pub fn r_count(&self, r_sq: &Rational) -> usize {
        self.radii.partition_point(|x| x <= r_sq)
    }

    /// Ids of the cells present at `grade`.
    pub fn alive_at(&self, grade: &Bigrade) -> Vec<usize> {
        let rc = self.r_count(&grade.r);
        (0..self.cells.len())
            .filter(|&i| self.cells[i].alive(rc, grade.k))
            .collect()
    }

    /// Number of cells of each dimension present at `grade`.
    pub fn f_vector_at(&self, grade: &Bigrade) -> Vec<usize> {
        let rc = self.r_count(&grade.r);
        let mut f = vec![0; self.top_dim().map_or(0, |d| d + 1)];
        for c in &self.cells {
            if c.alive(rc, grade.k) {
                f[c.dim] += 1;
            }
        }
        f
    }

    /// Sorted vertex sets of a cell.
    pub fn vertex_key(&self, id: usize) -> Vec<&SiteSet> {
        self.cells[id]
            .vertices
            .iter()
            .map(|&v| &self.vertex_sets[v as usize])
            .collect()
    }

    fn check_structure(&self) -> Result<(), BifiltrationError> {
        let bad = |m: String| Err(BifiltrationError::Invalid(m));
        for w in self.radii.windows(2) {
            if w[0] >= w[1] {
                return bad("radius table is not strictly increasing".into());
            }
        }
        let mut prev_dim = 0;
        for (id, c) in self.cells.iter().enumerate() {
            if c.dim < prev_dim {
                return bad(format!("cell {id} is out of dimension order"));
            }
            prev_dim = c.dim;
            if c.grades.is_empty() {
                return bad(format!("cell {id} has no grade"));
            }
            if c.grades.iter().any(|g| g.r as usize >= self.radii.len()) {
                return bad(format!("cell {id} has a radius index out of range"));
            }
            if c.vertices.iter().any(|&v| v as usize >= self.vertex_sets.len()) {
                return bad(format!("cell {id} has a vertex out of range"));
            }
            for &b in &c.boundary {
                if b as usize >= id || self.cells[b as usize].dim + 1 != c.dim {
                    return bad(format!("cell {id} has a bad facet {b}"));
                }
            }
        }
        Ok(())
    }

    /// Check the invariants of a bigraded complex: facets precede cells and
    /// are present whenever the cell is, ∂∂ = 0 over GF(2), grades are
    /// pairwise incomparable, and the model's criticality bound holds.
    pub fn validate(&self) -> Result<(), BifiltrationError> {
        self.check_structure()?;
        let bad = |m: String| Err(BifiltrationError::Invalid(m));
        let max_grades = match self.model {
            Model::Rhomb | Model::SRhomb | Model::CechOracle => 1,
            Model::SDel => 2,
        };
        for (id, c) in self.cells.iter().enumerate() {
            if c.grades.len() > max_grades {
                return bad(format!("cell {id} has {} minimal grades", c.grades.len()));
            }
            for (i, a) in c.grades.iter().enumerate() {
                for b in &c.grades[i + 1..] {
                    if a.le(b) || b.le(a) {
                        return bad(format!("cell {id} has comparable grades"));
                    }
                }
            }
            for g in &c.grades {
                for &b in &c.boundary {
                    if !self.cells[b as usize].grades.iter().any(|h| h.le(g)) {
                        return bad(format!("facet {b} of cell {id} enters after it"));
                    }
                }
            }
            if c.dim >= 2 {
                let mut count: rustc_hash::FxHashMap<u32, u32> = Default::default();
                for &b in &c.boundary {
                    for &bb in &self.cells[b as usize].boundary {
                        *count.entry(bb).or_default() += 1;
                    }
                }
                if count.values().any(|n| n % 2 == 1) {
                    return bad(format!("boundary of the boundary of cell {id} is nonzero"));
                }
            }
        }
        Ok(())
    }

    /// The cells whose vertex depths are all at most `k`.
    pub fn truncate(&self, k: usize) -> Result<BigradedComplex, BifiltrationError> {
        if k < 1 {
            return Err(BifiltrationError::InvalidTruncation);
        }
        self.filter(|c| c.depth_hi <= k)
    }

    /// The subcomplex of cells satisfying `keep`, which must be closed under
    /// taking facets.
    pub fn filter<F: Fn(&Cell) -> bool>(
        &self,
        keep: F,
    ) -> Result<BigradedComplex, BifiltrationError> {
        let mut new_id = vec![u32::MAX; self.cells.len()];
        let mut cells = Vec::new();
        for (id, c) in self.cells.iter().enumerate() {
            if !keep(c) {
                continue;
            }
            let boundary = c
                .boundary
                .iter()
                .map(|&b| match new_id[b as usize] {
                    u32::MAX => Err(BifiltrationError::Invalid(format!(
                        "facet {b} of kept cell {id} was removed"
                    ))),
                    nb => Ok(nb),
                })
                .collect::<Result<Vec<_>, _>>()?;
            new_id[id] = cells.len() as u32;
            cells.push(Cell {
                boundary,
                ..c.clone()
            });
        }
        Ok(BigradedComplex {
            cells,
            ..self.clone_header()
        })
    }

    fn clone_header(&self) -> BigradedComplex {
        BigradedComplex {
            model: self.model,
            radii: self.radii.clone(),
            snap: self.snap.clone(),
            vertex_sets: self.vertex_sets.clone(),
            cells: Vec::new(),
        }
    }

    /// The bifiltration on depths `1..=k` only: grades deeper than `k` are
    /// moved to `k`, which leaves every slice with depth at most `k` as it
    /// was. Unlike `truncate`, no cell is dropped.
    pub fn restrict_depth(&self, k: usize) -> Result<BigradedComplex, BifiltrationError> {
        if k < 1 {
            return Err(BifiltrationError::InvalidTruncation);
        }
        let cells = self
            .cells
            .iter()
            .map(|c| Cell {
                grades: minimal_grades(
                    c.grades
                        .iter()
                        .map(|g| Grade {
                            r: g.r,
                            k: g.k.min(k as u32),
                        })
                        .collect(),
                ),
                ..c.clone()
            })
            .collect();
        Ok(BigradedComplex {
            model: self.model,
            radii: self.radii.clone(),
            snap: self.snap.clone(),
            vertex_sets: self.vertex_sets.clone(),
            cells,
        })
    }

    /// Largest depth at which any cell is present.
    pub fn max_grade_depth(&self) -> usize {
        self.cells
            .iter()
            .flat_map(|c| c.grades.iter().map(|g| g.k as usize))
            .max()
            .unwrap_or(0)
    }

    /// Round every radius up onto `n` evenly spaced radii from 0 to the
    /// largest radius of the complex. Depths are unchanged.
    pub fn snap_grades(&self, n: usize) -> Result<BigradedComplex, BifiltrationError> {
        if n < 2 {
            return Err(BifiltrationError::InvalidSnap(n));
        }
        let max_sq = self.radii.last().cloned().unwrap_or_else(Rational::zero);
        let grid = SnapGrid { n, max_sq };
        let map: Vec<u32> = self
            .radii
            .iter()
            .map(|r| grid.ceil_index(r) as u32)
            .collect();
        let cells = self
            .cells
            .iter()
            .map(|c| {
                let grades = minimal_grades(
                    c.grades
                        .iter()
                        .map(|g| Grade {
                            r: map[g.r as usize],
                            k: g.k,
                        })
                        .collect(),
                );
                Cell {
                    grades,
                    ..c.clone()
                }
            })
            .collect();
        Ok(BigradedComplex {
            model: self.model,
            radii: (0..n).map(|j| grid.value(j)).collect(),
            snap: Some(grid),
            vertex_sets: self.vertex_sets.clone(),
            cells,
        })
    }
}

/// Drop duplicate and dominated grades.
pub(crate) fn minimal_grades(mut grades: Vec<Grade>) -> Vec<Grade> {
    grades.sort_unstable();
    grades.dedup();
    let all = grades.clone();
    grades.retain(|g| !all.iter().any(|h| h != g && h.le(g)));
    grades
}

/// Sorted distinct radii.
pub(crate) fn radius_table<'a, I>(values: I) -> Vec<Rational>
where
    I: IntoIterator<Item = &'a Rational>,
{
    let mut radii: Vec<Rational> = values.into_iter().cloned().collect();
    radii.sort_unstable();
    radii.dedup();
    radii
}

pub(crate) fn radius_index(radii: &[Rational], r: &Rational) -> u32 {
    radii.binary_search(r).expect("radius is in the table") as u32
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::parse_rational;

    fn q(s: &str) -> Rational {
        parse_rational(s).unwrap()
    }

    #[test]
    fn bigrade_order() {
        let a = Bigrade::new(q("1"), 3);
        let b = Bigrade::new(q("2"), 2);
        let c = Bigrade::new(q("2"), 4);
        assert!(a < b);
        assert!(a.le(&a));
        assert_eq!(a.partial_cmp(&c), None);
    }

    #[test]
    fn snap_ceiling() {
        // Radii 0, 0.3, 0.9 onto the grid {0, 0.9}.
        let radii: Vec<Rational> = ["0", "0.3", "0.9"].iter().map(|s| q(s) * q(s)).collect();
        let grid = SnapGrid {
            n: 2,
            max_sq: radii[2].clone(),
        };
        let snapped: Vec<usize> = radii.iter().map(|r| grid.ceil_index(r)).collect();
        assert_eq!(snapped, vec![0, 1, 1]);

        let fine = SnapGrid {
            n: 4,
            max_sq: radii[2].clone(),
        };
        assert_eq!(fine.ceil_index(&radii[1]), 1);
        assert_eq!(fine.value(1), radii[1]);
        assert_eq!(fine.ceil_index(&(q("0.31") * q("0.31"))), 2);
    }

    #[test]
    fn minimal_grades_drop_dominated() {
        let g = |r, k| Grade { r, k };
        assert_eq!(minimal_grades(vec![g(2, 1), g(1, 2), g(1, 2)]), vec![g(1, 2)]);
        assert_eq!(minimal_grades(vec![g(2, 2), g(1, 1)]), vec![g(1, 1), g(2, 2)]);
    }
}
