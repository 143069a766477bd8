use std::fmt::Write as _;

use super::{parse_error, IoError};
use crate::homology::{Barcode, HilbertGrid};
use crate::scalar::radius_f64;

/// CSV with header `r,k,dim,betti`, one row per grid entry; `r` is the
/// radius.
pub fn hilbert_csv(h: &HilbertGrid) -> String {
    let mut out = String::from("r,k,dim,betti\n");
    for (ri, ki, di, v) in h.entries() {
        let _ = writeln!(out, "{},{},{},{}", radius_f64(&h.r[ri]), h.k[ki], h.dims[di], v);
    }
    out
}

/// Rows of a Hilbert CSV as `(radius, k, dim, betti)`.
pub fn parse_hilbert_csv(text: &str) -> Result<Vec<(f64, usize, usize, usize)>, IoError> {
    let mut lines = text.lines().enumerate();
    match lines.next() {
        Some((_, "r,k,dim,betti")) => {}
        _ => return Err(parse_error(1, "expected header `r,k,dim,betti`")),
    }
    lines
        .filter(|(_, l)| !l.trim().is_empty())
        .map(|(i, l)| {
            let f: Vec<&str> = l.split(',').collect();
            let bad = || parse_error(i + 1, format!("malformed row {l:?}"));
            if f.len() != 4 {
                return Err(bad());
            }
            Ok((
                f[0].parse().map_err(|_| bad())?,
                f[1].parse().map_err(|_| bad())?,
                f[2].parse().map_err(|_| bad())?,
                f[3].parse().map_err(|_| bad())?,
            ))
        })
        .collect()
}

/// One bar per line: `<dim> <birth> <death|inf>`, with radii.
pub fn barcode_text(b: &Barcode) -> String {
    let mut out = String::new();
    for bar in b.bars() {
        let death = match &bar.death {
            Some(d) => radius_f64(d).to_string(),
            None => "inf".into(),
        };
        let _ = writeln!(out, "{} {} {}", bar.dim, radius_f64(&bar.birth), death);
    }
    out
}

/// Bars of a barcode text file as `(dim, birth, death)` radii.
pub fn parse_barcode_text(text: &str) -> Result<Vec<(usize, f64, Option<f64>)>, IoError> {
    text.lines()
        .enumerate()
        .filter(|(_, l)| !l.trim().is_empty())
        .map(|(i, l)| {
            let f: Vec<&str> = l.split_whitespace().collect();
            let bad = || parse_error(i + 1, format!("malformed bar {l:?}"));
            if f.len() != 3 {
                return Err(bad());
            }
            let death = match f[2] {
                "inf" => None,
                s => Some(s.parse().map_err(|_| bad())?),
            };
            Ok((f[0].parse().map_err(|_| bad())?, f[1].parse().map_err(|_| bad())?, death))
        })
        .collect()
}

/// Grayscale image of one homology degree of a Hilbert grid: radius grows
/// to the right and depth grows upward. Zero is white, darkness grows in
/// proportion to the rank, and ranks of `saturate` or more are black.
pub fn hilbert_pgm(h: &HilbertGrid, dim_index: usize, saturate: usize) -> String {
    let saturate = saturate.max(1);
    let (w, ht) = (h.r.len(), h.k.len());
    let mut out = format!("P2\n{w} {ht}\n255\n");
    for ki in (0..ht).rev() {
        let row: Vec<String> = (0..w)
            .map(|ri| {
                let v = h.get(ri, ki, dim_index).min(saturate);
                (255 - (255 * v + saturate / 2) / saturate).to_string()
            })
            .collect();
        out.push_str(&row.join(" "));
        out.push('\n');
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bifiltration::build_rhomb;
    use crate::geom::PointCloud;
    use crate::homology::{barcode_fixed_k, hilbert};
    use crate::scalar::Rational;
    use crate::tiling::enumerate_rhomboids;

    fn r(n: i64) -> Rational {
        Rational::from_integer(n.into())
    }

    fn sample() -> HilbertGrid {
        let t = enumerate_rhomboids(&PointCloud::from_integers(1, &[&[0], &[2]]).unwrap()).unwrap();
        hilbert(&build_rhomb(&t), &[r(0), r(1), r(4)], &[1, 2], &[0])
    }

    #[test]
    fn csv_round_trip() {
        let h = sample();
        let rows = parse_hilbert_csv(&hilbert_csv(&h)).unwrap();
        assert_eq!(rows.len(), 6);
        assert_eq!(rows[0], (0.0, 1, 0, 2));
        assert_eq!(rows[2], (1.0, 1, 0, 1));
        assert!(parse_hilbert_csv("x\n").is_err());
    }

    #[test]
    fn barcode_round_trip() {
        let t = enumerate_rhomboids(&PointCloud::from_integers(1, &[&[0], &[2]]).unwrap()).unwrap();
        let b = barcode_fixed_k(&build_rhomb(&t), 1, 0);
        let text = barcode_text(&b);
        assert_eq!(text, "0 0 1\n0 0 inf\n");
        assert_eq!(parse_barcode_text(&text).unwrap(), vec![(0, 0.0, Some(1.0)), (0, 0.0, None)]);
    }

    #[test]
    fn shading() {
        let h = sample();
        let img = hilbert_pgm(&h, 0, 2);
        let lines: Vec<&str> = img.lines().collect();
        assert_eq!(lines[..3], ["P2", "3 2", "255"]);
        // Top row is k = 2: empty at r = 0, one class afterwards.
        assert_eq!(lines[3], "255 127 127");
        assert_eq!(lines[4], "0 127 127");

        let zero = hilbert(
            &build_rhomb(&enumerate_rhomboids(&PointCloud::from_integers(1, &[&[0], &[2]]).unwrap()).unwrap()),
            &[r(0), r(4)],
            &[1],
            &[1],
        );
        assert!(hilbert_pgm(&zero, 0, 5).lines().skip(3).all(|l| l.split(' ').all(|v| v == "255")));
    }
}
