use std::cmp::Ordering;

use super::linalg::{adjugate, det, dot, norm_sq, sub};
use super::{GeomError, PointCloud};
use crate::scalar::{Rational, Ring, Scalar};

/// A (d-1)-sphere, radius kept squared.
#[derive(Clone, Debug, PartialEq)]
pub struct Sphere<T> {
    pub center: Vec<T>,
    pub radius_sq: T,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Side {
    Inside,
    On,
    Outside,
}

impl Side {
    fn from_ordering(o: Ordering) -> Side {
        match o {
            Ordering::Less => Side::Inside,
            Ordering::Equal => Side::On,
            Ordering::Greater => Side::Outside,
        }
    }
}

impl<T: Scalar> Sphere<T> {
    pub fn dim(&self) -> usize {
        self.center.len()
    }

    pub fn radius_f64(&self) -> f64 {
        self.radius_sq.to_f64().max(0.0).sqrt()
    }

    /// `|p - center|^2 - radius^2`; negative inside.
    pub fn power(&self, p: &[T]) -> T {
        norm_sq(&sub(p, &self.center)) - self.radius_sq.clone()
    }
}

/// Classify `p` against `s`. Fails on a dimension mismatch or, for inexact
/// scalars, when the sign cannot be certified.
pub fn side_of_sphere<T: Scalar>(s: &Sphere<T>, p: &[T]) -> Result<Side, GeomError> {
    if p.len() != s.dim() {
        return Err(GeomError::DimensionMismatch {
            expected: s.dim(),
            found: p.len(),
        });
    }
    s.power(p)
        .sign()
        .map(Side::from_ordering)
        .ok_or(GeomError::Undecided)
}

/// Division-free description of the smallest sphere through `b_0..b_m`.
///
/// With `v_j = b_j - b_0`, Gram matrix `G`, `D = det G` and
/// `W = sum_j (adj(G) h)_j v_j` where `h_j = |v_j|^2`, the center is
/// `b_0 + W / 2D` and the squared radius `|W|^2 / 4D^2`.
#[derive(Clone, Debug)]
pub struct CircumFrame<T> {
    pub b0: Vec<T>,
    pub vs: Vec<Vec<T>>,
    pub d: T,
    pub w: Vec<T>,
}

impl<T: Ring> CircumFrame<T> {
    /// `D` may be zero (or uncertain) for dependent points; callers check.
    pub fn new(points: &[&[T]]) -> CircumFrame<T> {
        let b0 = points[0].to_vec();
        let vs: Vec<Vec<T>> = points[1..].iter().map(|p| sub(p, &b0)).collect();
        let gram: Vec<Vec<T>> = vs
            .iter()
            .map(|a| vs.iter().map(|b| dot(a, b)).collect())
            .collect();
        let d = det(&gram);
        let mut w = vec![T::zero(); b0.len()];
        if !vs.is_empty() {
            let h: Vec<T> = vs.iter().map(|v| norm_sq(v)).collect();
            let adj = adjugate(&gram);
            for (row, v) in adj.iter().zip(&vs) {
                let mu = dot(row, &h);
                for (wi, vi) in w.iter_mut().zip(v) {
                    *wi = wi.clone() + mu.clone() * vi.clone();
                }
            }
        }
        CircumFrame { b0, vs, d, w }
    }

    /// `D |p - b0|^2 - (p - b0) . W`, which has the sign of the power of `p`.
    pub fn side_value(&self, p: &[T]) -> T {
        let q = sub(p, &self.b0);
        self.d.clone() * norm_sq(&q) - dot(&q, &self.w)
    }
}

impl<T: Scalar> CircumFrame<T> {
    pub fn sphere(&self) -> Sphere<T> {
        let two_d = self.d.clone() + self.d.clone();
        let center = self
            .b0
            .iter()
            .zip(&self.w)
            .map(|(b, w)| b.clone() + w.clone() / two_d.clone())
            .collect();
        let radius_sq = norm_sq(&self.w) / (two_d.clone() * two_d);
        Sphere { center, radius_sq }
    }
}

/// The smallest sphere through `points` (the unique one when there are
/// `dim + 1` of them). Fails on affinely dependent input.
pub fn circumsphere<T: Scalar>(points: &[Vec<T>]) -> Result<Sphere<T>, GeomError> {
    let first = points.first().ok_or(GeomError::Empty)?;
    let dim = first.len();
    if let Some(bad) = points.iter().find(|p| p.len() != dim) {
        return Err(GeomError::DimensionMismatch {
            expected: dim,
            found: bad.len(),
        });
    }
    if points.len() > dim + 1 {
        return Err(GeomError::Degenerate(format!(
            "{} points cannot be affinely independent in dimension {dim}",
            points.len()
        )));
    }
    let refs: Vec<&[T]> = points.iter().map(|p| p.as_slice()).collect();
    let frame = CircumFrame::new(&refs);
    match frame.d.sign() {
        Some(Ordering::Greater) => Ok(frame.sphere()),
        Some(_) => Err(GeomError::Degenerate("affinely dependent points".into())),
        None => Err(GeomError::Undecided),
    }
}

/// Sites split by a sphere into interior, boundary and exterior.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SpherePartition {
    pub x_in: Vec<usize>,
    pub x_on: Vec<usize>,
    pub x_out: Vec<usize>,
}

impl SpherePartition {
    pub fn of(cloud: &PointCloud, s: &Sphere<Rational>) -> Result<Self, GeomError> {
        let mut part = SpherePartition {
            x_in: vec![],
            x_on: vec![],
            x_out: vec![],
        };
        for (i, p) in cloud.sites().iter().enumerate() {
            match side_of_sphere(s, p)? {
                Side::Inside => part.x_in.push(i),
                Side::On => part.x_on.push(i),
                Side::Outside => part.x_out.push(i),
            }
        }
        Ok(part)
    }
}
