use std::sync::Arc;

use serde::{Deserialize, Serialize};

use super::{parse_error, IoError};
use crate::geom::PointCloud;
use crate::scalar::{format_rational, parse_rational, radius_f64};
use crate::tiling::{Rhomboid, RhomboidKey, RhomboidTiling, SiteSet};

#[derive(Serialize, Deserialize)]
struct TilingDoc {
    dim: usize,
    n: usize,
    cap: usize,
    sites: Vec<Vec<String>>,
    cells: Vec<CellDoc>,
}

#[derive(Serialize, Deserialize)]
struct CellDoc {
    id: usize,
    x_in: SiteSet,
    x_on: SiteSet,
    dim: usize,
    /// Radius, rounded.
    r: String,
    /// Exact squared radius.
    r_sq: String,
    k_min: usize,
    k_max: usize,
    facets: Vec<usize>,
}

pub fn tiling_json(t: &RhomboidTiling) -> Result<String, IoError> {
    let doc = TilingDoc {
        dim: t.cloud().dim(),
        n: t.cloud().n(),
        cap: t.cap(),
        sites: t
            .cloud()
            .sites()
            .iter()
            .map(|p| p.iter().map(format_rational).collect())
            .collect(),
        cells: t
            .cells()
            .iter()
            .enumerate()
            .map(|(id, c)| CellDoc {
                id,
                x_in: c.key.x_in.clone(),
                x_on: c.key.x_on.clone(),
                dim: c.dim(),
                r: radius_f64(&c.r_sq).to_string(),
                r_sq: format_rational(&c.r_sq),
                k_min: c.k_min(),
                k_max: c.k_max(),
                facets: t.facets_of(id).to_vec(),
            })
            .collect(),
    };
    Ok(serde_json::to_string_pretty(&doc)?)
}

/// Rebuild a tiling, checking that ids, dimensions, depths and facets agree
/// with the stored keys.
pub fn parse_tiling_json(text: &str) -> Result<RhomboidTiling, IoError> {
    let doc: TilingDoc = serde_json::from_str(text)?;
    let sites = doc
        .sites
        .iter()
        .map(|p| {
            p.iter()
                .map(|s| parse_rational(s).ok_or_else(|| parse_error(0, format!("bad coordinate {s:?}"))))
                .collect::<Result<Vec<_>, _>>()
        })
        .collect::<Result<Vec<_>, _>>()?;
    let cloud = PointCloud::new(doc.dim, sites)?;
    if cloud.n() != doc.n {
        return Err(parse_error(0, "site count does not match `n`"));
    }
    let cells = doc
        .cells
        .iter()
        .map(|c| {
            let r_sq = parse_rational(&c.r_sq)
                .ok_or_else(|| parse_error(0, format!("cell {}: bad r_sq {:?}", c.id, c.r_sq)))?;
            Ok(Rhomboid {
                key: RhomboidKey::new(c.x_in.clone(), c.x_on.clone()),
                r_sq,
            })
        })
        .collect::<Result<Vec<_>, IoError>>()?;
    let t = RhomboidTiling::from_cells(Arc::new(cloud), cells, doc.cap)?;
    for c in &doc.cells {
        let ok = t.cells().get(c.id).is_some_and(|stored| {
            stored.key.x_in == c.x_in
                && stored.key.x_on == c.x_on
                && stored.dim() == c.dim
                && stored.k_min() == c.k_min
                && stored.k_max() == c.k_max
        }) && t.facets_of(c.id) == c.facets.as_slice();
        if !ok {
            return Err(parse_error(0, format!("cell {} is inconsistent", c.id)));
        }
    }
    Ok(t)
}
