use std::path::Path;

use super::{parse_error, IoError};
use crate::geom::PointCloud;
use crate::scalar::{format_rational, parse_decimal};

/// Read one point per line. Coordinates are decimals separated by commas or
/// whitespace and are converted to rationals exactly; `#` starts a comment.
/// With `dim` unset the first point fixes the dimension.
pub fn parse_points(path: &Path, dim: Option<usize>) -> Result<PointCloud, IoError> {
    let text = std::fs::read_to_string(path).map_err(|source| IoError::File {
        path: path.to_path_buf(),
        source,
    })?;
    parse_points_str(&text, dim)
}

pub fn parse_points_str(text: &str, dim: Option<usize>) -> Result<PointCloud, IoError> {
    let mut dim = dim;
    let mut sites = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("");
        let fields: Vec<&str> = line
            .split(|c: char| c == ',' || c.is_whitespace())
            .filter(|s| !s.is_empty())
            .collect();
        if fields.is_empty() {
            continue;
        }
        let coords = fields
            .iter()
            .map(|f| parse_decimal(f).ok_or_else(|| parse_error(i + 1, format!("not a number: {f:?}"))))
            .collect::<Result<Vec<_>, _>>()?;
        let d = *dim.get_or_insert(coords.len());
        if coords.len() != d {
            return Err(parse_error(
                i + 1,
                format!("expected {d} coordinates, found {}", coords.len()),
            ));
        }
        sites.push(coords);
    }
    let dim = dim.ok_or_else(|| parse_error(0, "no points"))?;
    Ok(PointCloud::new(dim, sites)?)
}

/// One point per line with exact decimal coordinates separated by spaces.
pub fn write_points(cloud: &PointCloud) -> String {
    let mut out = String::new();
    for p in cloud.sites() {
        let row: Vec<String> = p.iter().map(format_rational).collect();
        out.push_str(&row.join(" "));
        out.push('\n');
    }
    out
}
