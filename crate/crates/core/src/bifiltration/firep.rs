use std::fmt::Write as _;

use num_traits::ToPrimitive;

use super::{BifiltrationError, Bigrade, BigradedComplex};
use crate::homology::Gf2Matrix;
use crate::scalar::radius_f64;

/// Coordinates of a generator: `x` is a radius (or a grid index after
/// snapping) and `y` is `k_max - k`, so both grow along the bifiltration.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct FirepGrade {
    pub x: f64,
    pub y: usize,
}

impl FirepGrade {
    pub fn le(&self, other: &FirepGrade) -> bool {
        self.x <= other.x && self.y <= other.y
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct FirepGenerator {
    pub grade: FirepGrade,
    /// Sorted indices into the generators one degree lower.
    pub boundary: Vec<u32>,
}

/// A free implicit representation of degree-`i` homology: generators in
/// chain degrees `i + 1`, `i` and `i - 1` with the two boundary maps.
#[derive(Clone, Debug, PartialEq)]
pub struct FirepDocument {
    pub degree: usize,
    pub x_label: String,
    pub y_label: String,
    /// Depth subtracted from to obtain `y`.
    pub k_max: usize,
    /// Whether `x` is an index into a radius grid.
    pub snapped: bool,
    pub high: Vec<FirepGenerator>,
    pub mid: Vec<FirepGenerator>,
    pub low_count: usize,
}

const SNAPPED_LABEL: &str = "radius grid index";

fn y_label(k_max: usize) -> String {
    format!("{k_max} - k")
}

impl FirepDocument {
    pub fn empty(degree: usize) -> Self {
        FirepDocument {
            degree,
            x_label: "radius".into(),
            y_label: y_label(0),
            k_max: 0,
            snapped: false,
            high: Vec::new(),
            mid: Vec::new(),
            low_count: 0,
        }
    }

    pub fn generator_count(&self) -> usize {
        self.high.len() + self.mid.len() + self.low_count
    }

    /// Check index ranges and that boundaries never enter after their
    /// sources.
    pub fn validate(&self) -> Result<(), BifiltrationError> {
        let bad = |m: String| Err(BifiltrationError::Invalid(m));
        for (j, g) in self.high.iter().enumerate() {
            for &b in &g.boundary {
                match self.mid.get(b as usize) {
                    None => return bad(format!("generator {j} refers to missing {b}")),
                    Some(t) if !t.grade.le(&g.grade) => {
                        return bad(format!("generator {j} enters before its face {b}"))
                    }
                    _ => {}
                }
            }
        }
        for (j, g) in self.mid.iter().enumerate() {
            if g.boundary.iter().any(|&b| b as usize >= self.low_count) {
                return bad(format!("middle generator {j} refers past the lower degree"));
            }
        }
        Ok(())
    }

    /// Serialize in the line-oriented FIREP text format.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        out.push_str("firep\n");
        let _ = writeln!(out, "{}", self.x_label);
        let _ = writeln!(out, "{}", self.y_label);
        let _ = writeln!(out, "{} {} {}", self.high.len(), self.mid.len(), self.low_count);
        for g in self.high.iter().chain(&self.mid) {
            let x = if self.snapped {
                format!("{}", g.grade.x as u64)
            } else {
                format_sig17(g.grade.x)
            };
            let _ = write!(out, "{x} {} ;", g.grade.y);
            for b in &g.boundary {
                let _ = write!(out, " {b}");
            }
            out.push('\n');
        }
        out
    }

    pub fn parse(text: &str) -> Result<Self, BifiltrationError> {
        let err = |line: usize, m: &str| BifiltrationError::Parse {
            line,
            message: m.to_string(),
        };
        let mut lines = text.lines().enumerate().map(|(i, l)| (i + 1, l));
        let mut next = |what: &str| lines.next().ok_or_else(|| err(0, &format!("missing {what}")));
        let (n, l) = next("header")?;
        if l.trim() != "firep" {
            return Err(err(n, "expected `firep`"));
        }
        let x_label = next("x label")?.1.trim().to_string();
        let (ny, y) = next("y label")?;
        let y_label = y.trim().to_string();
        let k_max = y_label
            .strip_suffix("- k")
            .and_then(|s| s.trim().parse::<usize>().ok())
            .ok_or_else(|| err(ny, "y label must read `<k_max> - k`"))?;
        let (nc, counts) = next("generator counts")?;
        let counts: Vec<usize> = counts
            .split_whitespace()
            .map(|s| s.parse().map_err(|_| err(nc, "bad generator count")))
            .collect::<Result<_, _>>()?;
        let [g2, g1, g0] = counts[..] else {
            return Err(err(nc, "expected three generator counts"));
        };
        let snapped = x_label.starts_with(SNAPPED_LABEL);
        let mut gens = Vec::with_capacity(g2 + g1);
        for _ in 0..g2 + g1 {
            let (ln, l) = next("generator line")?;
            let (grade, faces) = l.split_once(';').ok_or_else(|| err(ln, "missing `;`"))?;
            let mut it = grade.split_whitespace();
            let x: f64 = it
                .next()
                .and_then(|s| s.parse().ok())
                .ok_or_else(|| err(ln, "bad x coordinate"))?;
            let y: usize = it
                .next()
                .and_then(|s| s.parse().ok())
                .ok_or_else(|| err(ln, "bad y coordinate"))?;
            if it.next().is_some() {
                return Err(err(ln, "too many coordinates"));
            }
            let boundary: Vec<u32> = faces
                .split_whitespace()
                .map(|s| s.parse().map_err(|_| err(ln, "bad boundary index")))
                .collect::<Result<_, _>>()?;
            if boundary.windows(2).any(|w| w[0] >= w[1]) {
                return Err(err(ln, "boundary indices must be strictly increasing"));
            }
            gens.push(FirepGenerator {
                grade: FirepGrade { x, y },
                boundary,
            });
        }
        let mid = gens.split_off(g2);
        let doc = FirepDocument {
            degree: 0,
            x_label,
            y_label,
            k_max,
            snapped,
            high: gens,
            mid,
            low_count: g0,
        };
        doc.validate()?;
        Ok(doc)
    }

    /// Coordinates of a bigrade in this document.
    pub fn coordinates(&self, grade: &Bigrade) -> Option<FirepGrade> {
        let y = self.k_max.checked_sub(grade.k)?;
        let x = if self.snapped {
            grade.r.to_f64()?
        } else {
            radius_f64(&grade.r)
        };
        Some(FirepGrade { x, y })
    }
}

/// Plain decimal with 17 significant digits.
fn format_sig17(v: f64) -> String {
    if v == 0.0 || !v.is_finite() {
        return format!("{v}");
    }
    let exp = v.abs().log10().floor() as i32;
    let decimals = (16 - exp).max(0) as usize;
    format!("{v:.decimals$}")
}

/// Export degree-`i` homology of a one-critical complex. Cells that only
/// exist at depth 0 are left out.
pub fn assemble_firep(c: &BigradedComplex, i: usize) -> Result<FirepDocument, BifiltrationError> {
    if !c.model().is_one_critical() {
        return Err(BifiltrationError::UnsupportedModel(c.model()));
    }
    let top = c.top_dim().unwrap_or(0);
    if i + 1 > top {
        return Err(BifiltrationError::DegreeOutOfRange {
            degree: i,
            needed: i + 1,
            top,
        });
    }
    let k_max = c.max_grade_depth();
    let snapped = c.snap_grid().is_some();
    let grade_of = |id: usize| {
        let g = c.cell(id).grades[0];
        let x = if snapped {
            g.r as f64
        } else {
            radius_f64(c.radius(g.r))
        };
        FirepGrade {
            x,
            y: k_max - g.k as usize,
        }
    };
    let mut index = vec![u32::MAX; c.len()];
    let mut by_dim: [Vec<usize>; 3] = Default::default();
    for (id, cell) in c.cells().iter().enumerate() {
        if cell.grades[0].k == 0 || cell.dim + 1 < i || cell.dim > i + 1 {
            continue;
        }
        let slot = cell.dim + 1 - i;
        index[id] = by_dim[slot].len() as u32;
        by_dim[slot].push(id);
    }
    let gens = |ids: &[usize]| -> Vec<FirepGenerator> {
        ids.iter()
            .map(|&id| {
                let mut boundary: Vec<u32> =
                    c.cell(id).boundary.iter().map(|&b| index[b as usize]).collect();
                boundary.sort_unstable();
                FirepGenerator {
                    grade: grade_of(id),
                    boundary,
                }
            })
            .collect()
    };
    let x_label = match c.snap_grid() {
        Some(g) => format!("{SNAPPED_LABEL} ({} points up to {})", g.n, radius_f64(&g.max_sq)),
        None => "radius".to_string(),
    };
    let mid = if i == 0 {
        by_dim[1]
            .iter()
            .map(|&id| FirepGenerator {
                grade: grade_of(id),
                boundary: Vec::new(),
            })
            .collect()
    } else {
        gens(&by_dim[1])
    };
    let doc = FirepDocument {
        degree: i,
        x_label,
        y_label: y_label(k_max),
        k_max,
        snapped,
        high: gens(&by_dim[2]),
        mid,
        low_count: by_dim[0].len(),
    };
    debug_assert!(doc.validate().is_ok());
    Ok(doc)
}

/// Dimension of homology at `grade` computed from the document alone: live
/// middle generators minus the ranks of the live boundary columns.
///
/// For a snapped document `grade.r` is a grid index rather than a squared
/// radius.
pub fn firep_eval(f: &FirepDocument, grade: &Bigrade) -> usize {
    let Some(q) = f.coordinates(grade) else {
        return 0;
    };
    let live = |g: &&FirepGenerator| g.grade.le(&q);
    let mid: Vec<&FirepGenerator> = f.mid.iter().filter(live).collect();
    let rank_mid = Gf2Matrix::new(mid.iter().map(|g| g.boundary.clone()).collect()).rank();
    let rank_high =
        Gf2Matrix::new(f.high.iter().filter(live).map(|g| g.boundary.clone()).collect()).rank();
    mid.len() - rank_mid - rank_high
}
