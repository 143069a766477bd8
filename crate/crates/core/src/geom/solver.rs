use itertools::Itertools;

use super::sphere::{circumsphere, side_of_sphere, Side, Sphere};
use super::{GeomError, PointCloud};
use crate::scalar::{Rational, Scalar};

/// Minimum-radius sphere with every `x_on` site on it, every `x_in` site inside
/// or on it and every `x_out` site outside or on it. `None` if infeasible.
pub fn min_sphere_constrained(
    cloud: &PointCloud,
    x_on: &[usize],
    x_in: &[usize],
    x_out: &[usize],
) -> Result<Option<Sphere<Rational>>, GeomError> {
    let mut seen = vec![false; cloud.n()];
    for &i in x_on.iter().chain(x_in).chain(x_out) {
        cloud.check_index(i)?;
        if std::mem::replace(&mut seen[i], true) {
            return Err(GeomError::Overlap(i));
        }
    }
    let pick = |set: &[usize]| -> Vec<Vec<Rational>> {
        set.iter().map(|&i| cloud.site(i).to_vec()).collect()
    };
    min_sphere_constrained_points(cloud.dim(), &pick(x_on), &pick(x_in), &pick(x_out))
}

/// Point-based form of [`min_sphere_constrained`].
///
/// The optimum is the smallest sphere through some affinely independent
/// support set `B` of at most `dim + 1` constraint points (containing `on`
/// whenever that fits), so enumerating those candidates is exact.
pub fn min_sphere_constrained_points<T: Scalar>(
    dim: usize,
    on: &[Vec<T>],
    inside: &[Vec<T>],
    outside: &[Vec<T>],
) -> Result<Option<Sphere<T>>, GeomError> {
    if let Some(bad) = on.iter().chain(inside).chain(outside).find(|p| p.len() != dim) {
        return Err(GeomError::DimensionMismatch {
            expected: dim,
            found: bad.len(),
        });
    }
    let all: Vec<&Vec<T>> = on.iter().chain(inside).chain(outside).collect();
    if all.is_empty() {
        return Ok(Some(Sphere {
            center: vec![T::zero(); dim],
            radius_sq: T::zero(),
        }));
    }
    let feasible = |s: &Sphere<T>| -> Result<bool, GeomError> {
        for p in on {
            if side_of_sphere(s, p)? != Side::On {
                return Ok(false);
            }
        }
        for p in inside {
            if side_of_sphere(s, p)? == Side::Outside {
                return Ok(false);
            }
        }
        for p in outside {
            if side_of_sphere(s, p)? == Side::Inside {
                return Ok(false);
            }
        }
        Ok(true)
    };

    let mut best: Option<Sphere<T>> = None;
    let mut consider = |support: Vec<Vec<T>>| -> Result<(), GeomError> {
        let s = match circumsphere(&support) {
            Ok(s) => s,
            Err(GeomError::Degenerate(_)) => return Ok(()),
            Err(e) => return Err(e),
        };
        let better = match &best {
            None => true,
            Some(b) => (s.radius_sq.clone() - b.radius_sq.clone())
                .sign()
                .ok_or(GeomError::Undecided)?
                .is_lt(),
        };
        if better && feasible(&s)? {
            best = Some(s);
        }
        Ok(())
    };

    if on.len() <= dim + 1 {
        let rest: Vec<&Vec<T>> = inside.iter().chain(outside).collect();
        let lo = usize::from(on.is_empty());
        for extra in lo..=(dim + 1 - on.len()).min(rest.len()) {
            for chosen in rest.iter().combinations(extra) {
                let support = on.iter().chain(chosen.into_iter().copied()).cloned().collect();
                consider(support)?;
            }
        }
    } else {
        // More boundary points than a generic sphere carries: only spheres
        // through an independent subset of them can qualify.
        for size in 1..=dim + 1 {
            for chosen in on.iter().combinations(size) {
                consider(chosen.into_iter().cloned().collect())?;
            }
        }
    }
    Ok(best)
}

/// Minimum enclosing ball (Welzl), falling back to support-set enumeration on
/// degenerate supports.
pub fn miniball<T: Scalar>(points: &[Vec<T>]) -> Result<Sphere<T>, GeomError> {
    let dim = points.first().ok_or(GeomError::Empty)?.len();
    let refs: Vec<&[T]> = points.iter().map(|p| p.as_slice()).collect();
    let mut support = Vec::with_capacity(dim + 1);
    match welzl(&refs, refs.len(), &mut support, dim) {
        Ok(Some(s)) => Ok(s),
        Ok(None) => unreachable!("nonempty input has a ball"),
        Err(GeomError::Degenerate(_)) => {
            Ok(min_sphere_constrained_points(dim, &[], points, &[])?.expect("always feasible"))
        }
        Err(e) => Err(e),
    }
}

fn welzl<'a, T: Scalar>(
    points: &[&'a [T]],
    n: usize,
    support: &mut Vec<&'a [T]>,
    dim: usize,
) -> Result<Option<Sphere<T>>, GeomError> {
    let mut ball = if support.is_empty() {
        None
    } else {
        Some(circumsphere(
            &support.iter().map(|p| p.to_vec()).collect::<Vec<_>>(),
        )?)
    };
    if support.len() == dim + 1 {
        return Ok(ball);
    }
    for i in 0..n {
        let covered = match &ball {
            None => false,
            Some(b) => side_of_sphere(b, points[i])? != Side::Outside,
        };
        if !covered {
            support.push(points[i]);
            let inner = welzl(points, i, support, dim);
            support.pop();
            ball = inner?;
        }
    }
    Ok(ball)
}
