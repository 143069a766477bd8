//! Site-indexed predicates for tiling enumeration. Every decision is taken
//! on filtered `f64` values first and recomputed exactly, in integer
//! coordinates, when uncertain.

use std::cell::OnceCell;
use std::cmp::Ordering;

use num_bigint::{BigInt, Sign};

use super::linalg::{dot, norm_sq, orthogonal_complement, project_out, sub};
use super::sphere::{CircumFrame, Side, Sphere};
use super::{GeomError, PointCloud, Violation, ViolationKind};
use crate::scalar::{Filtered, Rational, Scalar};

fn violation(kind: ViolationKind, mut sites: Vec<usize>) -> GeomError {
    sites.sort_unstable();
    sites.dedup();
    GeomError::GeneralPosition(Violation { kind, sites })
}

fn ordering_side(o: Ordering) -> Side {
    match o {
        Ordering::Less => Side::Inside,
        Ordering::Equal => Side::On,
        Ordering::Greater => Side::Outside,
    }
}

/// Sign of `filtered`, falling back to the exact integer value.
fn certified(filtered: Filtered, exact: impl FnOnce() -> BigInt) -> Ordering {
    match filtered.sign() {
        Some(s) => s,
        None => match exact().sign() {
            Sign::Minus => Ordering::Less,
            Sign::NoSign => Ordering::Equal,
            Sign::Plus => Ordering::Greater,
        },
    }
}

/// The smallest sphere through a set of sites.
pub(crate) struct Frame<'a> {
    cloud: &'a PointCloud,
    on: Vec<usize>,
    approx: CircumFrame<Filtered>,
    exact: OnceCell<CircumFrame<BigInt>>,
}

impl<'a> Frame<'a> {
    /// Fails when the sites are affinely dependent.
    pub fn new(cloud: &'a PointCloud, on: &[usize]) -> Result<Self, GeomError> {
        let pts: Vec<&[Filtered]> = on.iter().map(|&i| cloud.approx(i)).collect();
        let frame = Frame {
            cloud,
            on: on.to_vec(),
            approx: CircumFrame::new(&pts),
            exact: OnceCell::new(),
        };
        let det = certified(frame.approx.d, || frame.exact().d.clone());
        if det != Ordering::Greater {
            let kind = if on.len() == 2 {
                ViolationKind::Duplicate
            } else {
                ViolationKind::AffinelyDependent
            };
            return Err(violation(kind, on.to_vec()));
        }
        Ok(frame)
    }

    /// The frame in integer coordinates, scaled by the cloud's common
    /// denominator.
    fn exact(&self) -> &CircumFrame<BigInt> {
        self.exact.get_or_init(|| {
            let pts: Vec<&[BigInt]> = self.on.iter().map(|&i| self.cloud.int_site(i)).collect();
            CircumFrame::new(&pts)
        })
    }

    pub fn side(&self, p: usize) -> Side {
        ordering_side(certified(
            self.approx.side_value(self.cloud.approx(p)),
            || self.exact().side_value(self.cloud.int_site(p)),
        ))
    }

    #[cfg(test)]
    pub fn sphere(&self) -> Sphere<Rational> {
        let f = self.exact();
        let denom = &f.d * BigInt::from(2) * self.cloud.scale();
        let center = f
            .b0
            .iter()
            .zip(&f.w)
            .map(|(b, w)| Rational::new(b * &f.d * BigInt::from(2) + w, denom.clone()))
            .collect();
        Sphere {
            center,
            radius_sq: self.radius_sq(),
        }
    }

    pub fn radius_sq(&self) -> Rational {
        let f = self.exact();
        let denom = &f.d * BigInt::from(2) * self.cloud.scale();
        Rational::new(norm_sq(&f.w), &denom * &denom)
    }

    /// Filtered center and squared radius.
    fn approx_sphere(&self) -> Sphere<Filtered> {
        self.approx.sphere()
    }
}

/// Sites sorted by their first coordinate, for window queries.
pub(crate) struct XIndex {
    order: Vec<usize>,
    xs: Vec<f64>,
    max_err: f64,
}

impl XIndex {
    pub fn new(cloud: &PointCloud) -> Self {
        let mut order: Vec<usize> = (0..cloud.n()).collect();
        order.sort_by(|&a, &b| cloud.approx(a)[0].v.total_cmp(&cloud.approx(b)[0].v));
        let xs = order.iter().map(|&i| cloud.approx(i)[0].v).collect();
        let max_err = (0..cloud.n())
            .map(|i| cloud.approx(i)[0].e)
            .fold(0.0, f64::max);
        XIndex { order, xs, max_err }
    }

    /// Every site whose first coordinate may lie within `half` of `center`.
    fn window(&self, center: f64, half: f64) -> &[usize] {
        let slack = half + self.max_err;
        let lo = self.xs.partition_point(|&x| x < center - slack);
        let hi = self.xs.partition_point(|&x| x <= center + slack);
        &self.order[lo..hi]
    }

    pub fn all(&self) -> &[usize] {
        &self.order
    }
}

/// Upper bound on how far the ball of `s` reaches from `x` along the first
/// axis; infinite when the filtered values are unusable.
fn reach(s: &Sphere<Filtered>, x: f64) -> f64 {
    let c = &s.center[0];
    let r = &s.radius_sq;
    if !(c.v.is_finite() && c.e.is_finite() && r.v.is_finite() && r.e.is_finite()) {
        return f64::INFINITY;
    }
    ((c.v - x).abs() + c.e + (r.v + r.e).max(0.0).sqrt()) * (1.0 + 1e-9)
}

/// Interior of the smallest sphere through a frame's sites.
pub(crate) struct Classification {
    pub inside: Vec<usize>,
    /// Sites outside the frame lying on the sphere.
    pub extra_on: Vec<usize>,
}

/// Classify all sites against `frame`, giving up (`None`) once more than
/// `limit` sites are inside.
pub(crate) fn classify(
    frame: &Frame<'_>,
    index: &XIndex,
    limit: usize,
) -> Option<Classification> {
    let s = frame.approx_sphere();
    let x = s.center[0].v;
    let half = reach(&s, x);
    let candidates = if half.is_finite() {
        index.window(x, half)
    } else {
        index.all()
    };
    let mut inside = Vec::new();
    let mut extra_on = Vec::new();
    for &p in candidates {
        if frame.on.contains(&p) {
            continue;
        }
        match frame.side(p) {
            Side::Inside => {
                inside.push(p);
                if inside.len() > limit {
                    return None;
                }
            }
            Side::On => extra_on.push(p),
            Side::Outside => {}
        }
    }
    inside.sort_unstable();
    Some(Classification { inside, extra_on })
}

/// The one-parameter family of spheres through `dim` sites, with centers
/// `c(t) = c_F + t u / D` on the line orthogonal to their affine hull.
///
/// A site `p` is inside the sphere at `t` iff `alpha_p + beta_p t < 0`. The
/// power of a point is affine in `t`, so a ball of the family between two
/// members lies in the union of their balls.
pub(crate) struct Pencil<'a> {
    frame: Frame<'a>,
    u: Vec<Filtered>,
    u_exact: OnceCell<Vec<BigInt>>,
}

type Coeffs = (Filtered, Filtered);

impl<'a> Pencil<'a> {
    pub fn new(cloud: &'a PointCloud, face: &[usize]) -> Result<Self, GeomError> {
        debug_assert_eq!(face.len(), cloud.dim());
        let frame = Frame::new(cloud, face)?;
        let u = orthogonal_complement(&frame.approx.vs, cloud.dim());
        Ok(Pencil {
            frame,
            u,
            u_exact: OnceCell::new(),
        })
    }

    fn u_exact(&self) -> &[BigInt] {
        self.u_exact
            .get_or_init(|| orthogonal_complement(&self.frame.exact().vs, self.frame.cloud.dim()))
    }

    fn coeffs_approx(&self, p: usize) -> Coeffs {
        let f = &self.frame.approx;
        let q = sub(self.frame.cloud.approx(p), &f.b0);
        let alpha = f.d * norm_sq(&q) - dot(&q, &f.w);
        let beta = Filtered::exact(-2.0) * f.d * dot(&q, &self.u);
        (alpha, beta)
    }

    fn coeffs_exact(&self, p: usize) -> (BigInt, BigInt) {
        let f = self.frame.exact();
        let q = sub(self.frame.cloud.int_site(p), &f.b0);
        let alpha = f.d.clone() * norm_sq(&q) - dot(&q, &f.w);
        let beta = BigInt::from(-2) * f.d.clone() * dot(&q, self.u_exact());
        (alpha, beta)
    }

    fn beta_sign(&self, c: &Coeffs, p: usize) -> Ordering {
        certified(c.1, || self.coeffs_exact(p).1)
    }

    /// Sign of `t_p - t_q` for the roots `t = -alpha / beta` (betas nonzero).
    fn root_cmp(&self, (cp, p): (&Coeffs, usize), (cq, q): (&Coeffs, usize)) -> Ordering {
        let num = certified(cq.0 * cp.1 - cp.0 * cq.1, || {
            let ((ap, bp), (aq, bq)) = (self.coeffs_exact(p), self.coeffs_exact(q));
            aq * bp - ap * bq
        });
        if self.beta_sign(cp, p) == self.beta_sign(cq, q) {
            num
        } else {
            num.reverse()
        }
    }

    /// The sites bounding the parameter interval on which exactly the sites
    /// of `x_in` (sorted) are inside: `(lower, upper)`, each absent when the
    /// interval is unbounded on that side.
    ///
    /// Only sites near the face are examined at first. The answer is final
    /// once the balls at both endpoints stay within the examined window,
    /// since every ball in between lies in their union.
    pub fn interval(
        &self,
        index: &XIndex,
        x_in: &[usize],
    ) -> Result<(Option<usize>, Option<usize>), GeomError> {
        let n = self.frame.cloud.n();
        let s = self.frame.approx_sphere();
        let x = s.center[0].v;
        let mut half = reach(&s, x) * 2.0;
        let mut candidates: Vec<usize> = Vec::new();
        while half.is_finite() {
            candidates.clear();
            candidates.extend_from_slice(index.window(x, half));
            candidates.extend_from_slice(x_in);
            candidates.sort_unstable();
            candidates.dedup();
            if candidates.len() == n {
                break;
            }
            let (lo, hi) = self.interval_among(&candidates, x_in)?;
            let (Some(lo), Some(hi)) = (lo, hi) else {
                break;
            };
            let need = [lo, hi]
                .iter()
                .map(|&t| {
                    let mut pts: Vec<&[Filtered]> =
                        self.frame.on.iter().map(|&i| self.frame.cloud.approx(i)).collect();
                    pts.push(self.frame.cloud.approx(t));
                    reach(&CircumFrame::new(&pts).sphere(), x)
                })
                .fold(0.0, f64::max);
            if need <= half {
                return Ok((Some(lo), Some(hi)));
            }
            half = need.max(half * 2.0);
        }
        let all: Vec<usize> = (0..n).collect();
        self.interval_among(&all, x_in)
    }

    fn interval_among(
        &self,
        candidates: &[usize],
        x_in: &[usize],
    ) -> Result<(Option<usize>, Option<usize>), GeomError> {
        let face = &self.frame.on;
        let mut lower: Option<(usize, Coeffs)> = None;
        let mut upper: Option<(usize, Coeffs)> = None;
        for &p in candidates {
            if face.contains(&p) {
                continue;
            }
            let c = self.coeffs_approx(p);
            let inside = x_in.binary_search(&p).is_ok();
            let is_lower = match self.beta_sign(&c, p) {
                Ordering::Equal => {
                    let mut s = face.clone();
                    s.push(p);
                    return Err(violation(ViolationKind::AffinelyDependent, s));
                }
                Ordering::Less => inside,
                Ordering::Greater => !inside,
            };
            let (slot, want) = if is_lower {
                (&mut lower, Ordering::Greater)
            } else {
                (&mut upper, Ordering::Less)
            };
            match slot {
                None => *slot = Some((p, c)),
                Some((cur, cc)) => match self.root_cmp((&c, p), (cc, *cur)) {
                    Ordering::Equal => {
                        let mut s = face.clone();
                        s.extend([p, *cur]);
                        return Err(violation(ViolationKind::Cospherical, s));
                    }
                    o if o == want => *slot = Some((p, c)),
                    _ => {}
                },
            }
        }
        if let (Some((l, cl)), Some((u, cu))) = (&lower, &upper) {
            match self.root_cmp((cl, *l), (cu, *u)) {
                Ordering::Less => {}
                Ordering::Equal => {
                    let mut s = face.clone();
                    s.extend([*l, *u]);
                    return Err(violation(ViolationKind::Cospherical, s));
                }
                Ordering::Greater => {
                    return Err(GeomError::Degenerate(format!(
                        "face {face:?} has an empty realizing interval"
                    )))
                }
            }
        }
        Ok((lower.map(|l| l.0), upper.map(|u| u.0)))
    }
}

/// A `dim + 1`-subset whose circumsphere has no site inside (a Delaunay
/// cell), found by growing a sphere from site 0.
pub(crate) fn delaunay_seed(cloud: &PointCloud) -> Result<Vec<usize>, GeomError> {
    let dim = cloud.dim();
    let site = |i: usize| cloud.site(i);
    let mut on = vec![0usize];
    let mut center: Vec<Rational> = site(0).to_vec();
    for _ in 0..dim {
        let b0 = site(on[0]);
        let vs: Vec<Vec<Rational>> = on[1..].iter().map(|&i| sub(site(i), b0)).collect();
        let mut u = (0..dim)
            .map(|axis| {
                let e: Vec<Rational> = (0..dim)
                    .map(|j| Rational::from_i64(i64::from(j == axis)))
                    .collect();
                project_out(&vs, &e)
            })
            .find(|u| u.iter().any(|x| x.sign() != Some(Ordering::Equal)))
            .expect("independent vectors leave a nonzero complement");
        let base = norm_sq(&sub(b0, &center));
        let coeffs: Vec<(usize, Rational, Rational)> = (0..cloud.n())
            .filter(|p| !on.contains(p))
            .map(|p| {
                let alpha = norm_sq(&sub(site(p), &center)) - base.clone();
                let beta = Rational::from_i64(-2) * dot(&sub(site(p), b0), &u);
                (p, alpha, beta)
            })
            .collect();
        if let Some(&(p, _, _)) = coeffs.iter().find(|(_, a, _)| a.sign() != Some(Ordering::Greater)) {
            let mut s = on.clone();
            s.push(p);
            return Err(violation(ViolationKind::Duplicate, s));
        }
        let first_hit = |flip: bool| -> Result<Option<(usize, Rational)>, GeomError> {
            let mut best: Option<(usize, Rational)> = None;
            for (p, a, b) in &coeffs {
                let b = if flip { -b.clone() } else { b.clone() };
                if b.sign() != Some(Ordering::Less) {
                    continue;
                }
                let t = -a.clone() / b;
                match &best {
                    Some((q, bt)) if *bt == t => {
                        let mut s = on.clone();
                        s.extend([*p, *q]);
                        return Err(violation(ViolationKind::Cospherical, s));
                    }
                    Some((_, bt)) if *bt < t => {}
                    _ => best = Some((*p, t)),
                }
            }
            Ok(best)
        };
        let (p, t) = match first_hit(false)? {
            Some(hit) => hit,
            None => {
                u = u.into_iter().map(|x| -x).collect();
                match first_hit(true)? {
                    Some(hit) => hit,
                    None => {
                        let mut s = on.clone();
                        s.extend(coeffs.first().map(|c| c.0));
                        return Err(violation(ViolationKind::AffinelyDependent, s));
                    }
                }
            }
        };
        for (c, x) in center.iter_mut().zip(&u) {
            *c = c.clone() + t.clone() * x.clone();
        }
        on.push(p);
    }
    on.sort_unstable();
    Ok(on)
}
