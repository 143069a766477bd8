use anyhow::{bail, Context, Result};
use multicover::scalar::parse_decimal;
use multicover::Rational;

/// `a:b:n`: `n` evenly spaced radii from `a` to `b` inclusive.
#[derive(Clone, Debug, PartialEq)]
pub struct RadiusGrid {
    pub from: Rational,
    pub to: Rational,
    pub count: usize,
}

impl RadiusGrid {
    /// Squared radii of the grid points.
    pub fn squared(&self) -> Vec<Rational> {
        if self.count == 1 {
            return vec![&self.from * &self.from];
        }
        let steps = Rational::from_integer((self.count as i64 - 1).into());
        (0..self.count)
            .map(|j| {
                let t = Rational::from_integer((j as i64).into()) / &steps;
                let r = &self.from + (&self.to - &self.from) * t;
                &r * &r
            })
            .collect()
    }
}

pub fn parse_radius_grid(s: &str) -> Result<RadiusGrid> {
    let parts: Vec<&str> = s.split(':').collect();
    let [a, b, n] = parts[..] else {
        bail!("expected `from:to:count`, got `{s}`");
    };
    let from = parse_decimal(a).with_context(|| format!("bad radius `{a}`"))?;
    let to = parse_decimal(b).with_context(|| format!("bad radius `{b}`"))?;
    let count: usize = n.parse().with_context(|| format!("bad count `{n}`"))?;
    if count == 0 {
        bail!("the radius grid needs at least one point");
    }
    if from < Rational::from_integer(0.into()) || to < from {
        bail!("radius grid `{s}` must satisfy 0 <= from <= to");
    }
    Ok(RadiusGrid { from, to, count })
}

/// `a:b`, inclusive.
pub fn parse_k_range(s: &str) -> Result<(usize, usize)> {
    let (a, b) = s.split_once(':').with_context(|| format!("expected `from:to`, got `{s}`"))?;
    let a: usize = a.parse().with_context(|| format!("bad depth `{a}`"))?;
    let b: usize = b.parse().with_context(|| format!("bad depth `{b}`"))?;
    if a < 1 || b < a {
        bail!("depth range `{s}` must satisfy 1 <= from <= to");
    }
    Ok((a, b))
}

pub fn parse_hom_dims(s: &str) -> Result<Vec<usize>> {
    let mut dims = s
        .split(',')
        .map(|d| d.trim().parse::<usize>().with_context(|| format!("bad degree `{d}`")))
        .collect::<Result<Vec<_>>>()?;
    dims.sort_unstable();
    dims.dedup();
    Ok(dims)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn grids() {
        let g = parse_radius_grid("0:1:3").unwrap();
        let half = Rational::new(1.into(), 4.into());
        assert_eq!(g.squared(), vec![Rational::from_integer(0.into()), half, Rational::from_integer(1.into())]);
        assert!(parse_radius_grid("1:0:3").is_err());
        assert!(parse_radius_grid("0:1").is_err());
        assert!(parse_radius_grid("0:1:0").is_err());
    }

    #[test]
    fn depths_and_degrees() {
        assert_eq!(parse_k_range("1:4").unwrap(), (1, 4));
        assert!(parse_k_range("0:4").is_err());
        assert!(parse_k_range("3:2").is_err());
        assert_eq!(parse_hom_dims("1,0,1").unwrap(), vec![0, 1]);
        assert!(parse_hom_dims("x").is_err());
    }
}
