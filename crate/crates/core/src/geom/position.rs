use std::cmp::Ordering;
use std::fmt;

use itertools::Itertools;

use super::linalg::{det, norm_sq, sub};
use super::PointCloud;
use crate::scalar::{certified_sign, Filtered, Rational, Scalar};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum ViolationKind {
    Duplicate,
    AffinelyDependent,
    Cospherical,
}

/// A subset of sites breaking general position.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Violation {
    pub kind: ViolationKind,
    pub sites: Vec<usize>,
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let what = match self.kind {
            ViolationKind::Duplicate => "duplicate sites",
            ViolationKind::AffinelyDependent => "affinely dependent sites",
            ViolationKind::Cospherical => "cospherical sites",
        };
        write!(f, "{what} {:?}", self.sites)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum GeneralPosition {
    Certified,
    Violated(Violation),
}

impl GeneralPosition {
    pub fn is_certified(&self) -> bool {
        matches!(self, GeneralPosition::Certified)
    }
}

/// Sign of `det [p_i - p_0]`.
fn orientation<T: Scalar>(pts: &[&[T]]) -> T {
    let rows: Vec<Vec<T>> = pts[1..].iter().map(|p| sub(p, pts[0])).collect();
    det(&rows)
}

/// Sign of the lifted determinant `det [p_i - p_0, |p_i - p_0|^2]`, zero iff
/// the `dim + 2` points lie on a common sphere (or are dependent).
fn insphere<T: Scalar>(pts: &[&[T]]) -> T {
    let rows: Vec<Vec<T>> = pts[1..]
        .iter()
        .map(|p| {
            let mut r = sub(p, pts[0]);
            let lift = norm_sq(&r);
            r.push(lift);
            r
        })
        .collect();
    det(&rows)
}

struct Orient;
struct InSphere;

// Closures cannot be generic over the scalar type, hence the trait.
trait Predicate {
    fn eval<T: Scalar>(pts: &[&[T]]) -> T;
}

impl Predicate for Orient {
    fn eval<T: Scalar>(pts: &[&[T]]) -> T {
        orientation(pts)
    }
}

impl Predicate for InSphere {
    fn eval<T: Scalar>(pts: &[&[T]]) -> T {
        insphere(pts)
    }
}

fn sign_of<P: Predicate>(cloud: &PointCloud, subset: &[usize]) -> Ordering {
    let approx: Vec<&[Filtered]> = subset.iter().map(|&i| cloud.approx(i)).collect();
    certified_sign(
        || P::eval(&approx),
        || {
            let exact: Vec<&[Rational]> = subset.iter().map(|&i| cloud.site(i)).collect();
            P::eval(&exact)
        },
    )
}

fn duplicates(cloud: &PointCloud) -> Option<Violation> {
    let mut order: Vec<usize> = (0..cloud.n()).collect();
    order.sort_by(|&a, &b| cloud.site(a).cmp(cloud.site(b)));
    order.windows(2).find_map(|w| {
        (cloud.site(w[0]) == cloud.site(w[1])).then(|| Violation {
            kind: ViolationKind::Duplicate,
            sites: vec![w[0].min(w[1]), w[0].max(w[1])],
        })
    })
}

/// Exact check that sites are distinct, no `dim + 1` are affinely dependent
/// and no `dim + 2` are cospherical. Reports the first violating subset.
///
/// Cost grows like `n^(dim + 2)`.
pub fn check_general_position(cloud: &PointCloud) -> GeneralPosition {
    check_general_position_within(cloud, u64::MAX).expect("unbounded budget")
}

/// As [`check_general_position`], but returns `None` without checking when
/// more than `budget` subsets would have to be examined.
pub fn check_general_position_within(cloud: &PointCloud, budget: u64) -> Option<GeneralPosition> {
    let n = cloud.n() as u64;
    let d = cloud.dim() as u64;
    if binomial(n, d + 1).saturating_add(binomial(n, d + 2)) > budget {
        return None;
    }
    if let Some(v) = duplicates(cloud) {
        return Some(GeneralPosition::Violated(v));
    }
    let d = cloud.dim();
    if d > 1 {
        for subset in (0..cloud.n()).combinations(d + 1) {
            if sign_of::<Orient>(cloud, &subset) == Ordering::Equal {
                return Some(GeneralPosition::Violated(Violation {
                    kind: ViolationKind::AffinelyDependent,
                    sites: subset,
                }));
            }
        }
        for subset in (0..cloud.n()).combinations(d + 2) {
            if sign_of::<InSphere>(cloud, &subset) == Ordering::Equal {
                return Some(GeneralPosition::Violated(Violation {
                    kind: ViolationKind::Cospherical,
                    sites: subset,
                }));
            }
        }
    }
    Some(GeneralPosition::Certified)
}

pub(crate) fn binomial(n: u64, k: u64) -> u64 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k as u128 {
        acc = acc * (n as u128 - i) / (i + 1);
        if acc > u64::MAX as u128 {
            return u64::MAX;
        }
    }
    acc as u64
}
