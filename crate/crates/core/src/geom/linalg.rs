//! Division-free small dense linear algebra (sizes up to 4), generic over the scalar.

use crate::scalar::Ring;

pub(crate) fn dot<T: Ring>(a: &[T], b: &[T]) -> T {
    a.iter()
        .zip(b)
        .fold(T::zero(), |acc, (x, y)| acc + x.clone() * y.clone())
}

pub(crate) fn sub<T: Ring>(a: &[T], b: &[T]) -> Vec<T> {
    a.iter().zip(b).map(|(x, y)| x.clone() - y.clone()).collect()
}

pub(crate) fn norm_sq<T: Ring>(a: &[T]) -> T {
    dot(a, a)
}

fn minor<T: Ring>(m: &[Vec<T>], row: usize, col: usize) -> Vec<Vec<T>> {
    m.iter()
        .enumerate()
        .filter(|&(i, _)| i != row)
        .map(|(_, r)| {
            r.iter()
                .enumerate()
                .filter(|&(j, _)| j != col)
                .map(|(_, x)| x.clone())
                .collect()
        })
        .collect()
}

/// Determinant by cofactor expansion. The empty matrix has determinant one.
pub(crate) fn det<T: Ring>(m: &[Vec<T>]) -> T {
    match m.len() {
        0 => T::one(),
        1 => m[0][0].clone(),
        2 => m[0][0].clone() * m[1][1].clone() - m[0][1].clone() * m[1][0].clone(),
        3 => {
            let a = &m[0];
            a[0].clone()
                * (m[1][1].clone() * m[2][2].clone() - m[1][2].clone() * m[2][1].clone())
                - a[1].clone()
                    * (m[1][0].clone() * m[2][2].clone() - m[1][2].clone() * m[2][0].clone())
                + a[2].clone()
                    * (m[1][0].clone() * m[2][1].clone() - m[1][1].clone() * m[2][0].clone())
        }
        n => (0..n).fold(T::zero(), |acc, j| {
            let term = m[0][j].clone() * det(&minor(m, 0, j));
            if j % 2 == 0 {
                acc + term
            } else {
                acc - term
            }
        }),
    }
}

/// Adjugate (transposed cofactor matrix), so that `adj(m) * m = det(m) * I`.
pub(crate) fn adjugate<T: Ring>(m: &[Vec<T>]) -> Vec<Vec<T>> {
    let n = m.len();
    if n == 1 {
        return vec![vec![T::one()]];
    }
    let mut adj = vec![vec![T::zero(); n]; n];
    for (i, row) in m.iter().enumerate() {
        for j in 0..row.len() {
            let c = det(&minor(m, i, j));
            adj[j][i] = if (i + j) % 2 == 0 { c } else { -c };
        }
    }
    adj
}

/// A nonzero vector orthogonal to all of `vs` (which has `dim - 1` independent
/// rows), for `dim` in 1..=3.
pub(crate) fn orthogonal_complement<T: Ring>(vs: &[Vec<T>], dim: usize) -> Vec<T> {
    match (dim, vs.len()) {
        (1, 0) => vec![T::one()],
        (2, 1) => vec![-vs[0][1].clone(), vs[0][0].clone()],
        (3, 2) => {
            let (a, b) = (&vs[0], &vs[1]);
            vec![
                a[1].clone() * b[2].clone() - a[2].clone() * b[1].clone(),
                a[2].clone() * b[0].clone() - a[0].clone() * b[2].clone(),
                a[0].clone() * b[1].clone() - a[1].clone() * b[0].clone(),
            ]
        }
        _ => panic!("orthogonal complement needs dim - 1 vectors (dim {dim}, got {})", vs.len()),
    }
}

/// `D * e - V^T adj(G) V e` for the Gram matrix `G = V V^T`: the projection of
/// `e` onto the orthogonal complement of the rows of `V`, scaled by `D = det G`.
pub(crate) fn project_out<T: Ring>(vs: &[Vec<T>], e: &[T]) -> Vec<T> {
    let gram: Vec<Vec<T>> = vs.iter().map(|a| vs.iter().map(|b| dot(a, b)).collect()).collect();
    let d = det(&gram);
    if vs.is_empty() {
        return e.to_vec();
    }
    let adj = adjugate(&gram);
    let ve: Vec<T> = vs.iter().map(|v| dot(v, e)).collect();
    let coeffs: Vec<T> = adj.iter().map(|row| dot(row, &ve)).collect();
    let mut out: Vec<T> = e.iter().map(|x| d.clone() * x.clone()).collect();
    for (c, v) in coeffs.iter().zip(vs) {
        for (o, x) in out.iter_mut().zip(v) {
            *o = o.clone() - c.clone() * x.clone();
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn m(rows: &[&[i64]]) -> Vec<Vec<f64>> {
        rows.iter().map(|r| r.iter().map(|&x| x as f64).collect()).collect()
    }

    #[test]
    fn determinants() {
        assert_eq!(det::<f64>(&[]), 1.0);
        assert_eq!(det(&m(&[&[2, 1], &[1, 3]])), 5.0);
        assert_eq!(det(&m(&[&[1, 2, 3], &[0, 1, 4], &[5, 6, 0]])), 1.0);
        assert_eq!(
            det(&m(&[&[1, 0, 2, -1], &[3, 0, 0, 5], &[2, 1, 4, -3], &[1, 0, 5, 0]])),
            30.0
        );
    }

    #[test]
    fn adjugate_inverts_up_to_determinant() {
        let a = m(&[&[1, 2, 3], &[0, 1, 4], &[5, 6, 0]]);
        let adj = adjugate(&a);
        for i in 0..3 {
            for j in 0..3 {
                let v: f64 = (0..3).map(|k| adj[i][k] * a[k][j]).sum();
                assert_eq!(v, if i == j { 1.0 } else { 0.0 });
            }
        }
    }

    #[test]
    fn complements_are_orthogonal() {
        let vs = m(&[&[1, 2, 3], &[-1, 0, 2]]);
        let u = orthogonal_complement(&vs, 3);
        assert!(vs.iter().all(|v| dot(v, &u) == 0.0));
        let p = project_out(&m(&[&[1, 1, 0]]), &[1.0, 0.0, 0.0]);
        assert_eq!(dot(&p, &[1.0, 1.0, 0.0]), 0.0);
    }
}
