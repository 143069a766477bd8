//! The stages of a run: load the sites, enumerate the tiling, build the
//! model, and evaluate. Outputs are collected in memory and written at the
//! end, so a failed run leaves nothing behind.

use std::fs;
use std::path::{Path, PathBuf};

use anyhow::{anyhow, bail, Context, Result};
use log::info;
use multicover::bifiltration::{
    assemble_firep, build_rhomb, build_sdel_up_to, build_srhomb, Bigrade, BigradedComplex, Model,
    SnapGrid,
};
use multicover::homology::{barcode_fixed_k, betti_numbers_at, hilbert, Barcode, HilbertGrid};
use multicover::io::{
    barcode_text, generate, hilbert_csv, hilbert_pgm, parse_points, tiling_json, write_points,
    GeneratorSpec,
};
use multicover::oracle::{cech_multicover_nerve, OracleError};
use multicover::tiling::{enumerate_truncated, slice_tiling, tiling_stats, RhomboidTiling};
use multicover::{PointCloud, Rational};
use serde_json::json;

use crate::ranges::RadiusGrid;

/// Where the sites come from.
pub enum Source {
    File { path: PathBuf, dim: Option<usize> },
    Generated(GeneratorSpec),
}

pub struct Settings {
    pub source: Source,
    pub jitter: Option<(f64, u64)>,
    pub max_k: Option<usize>,
    pub model: Model,
    pub hom_dims: Vec<usize>,
    pub r_grid: Option<RadiusGrid>,
    pub k_range: Option<(usize, usize)>,
    pub snap: usize,
}

/// Files produced by a run, written together by [`Outputs::commit`].
#[derive(Default)]
pub struct Outputs {
    files: Vec<(String, String)>,
}

impl Outputs {
    pub fn add(&mut self, name: impl Into<String>, contents: String) {
        self.files.push((name.into(), contents));
    }

    pub fn names(&self) -> impl Iterator<Item = &str> {
        self.files.iter().map(|f| f.0.as_str())
    }

    /// Write every file under `dir`, removing the ones already written if
    /// any write fails.
    pub fn commit(&self, dir: &Path) -> Result<Vec<PathBuf>> {
        fs::create_dir_all(dir).with_context(|| format!("creating {}", dir.display()))?;
        let mut written = Vec::new();
        for (name, contents) in &self.files {
            let path = dir.join(name);
            if let Err(e) = fs::write(&path, contents) {
                for p in &written {
                    let _ = fs::remove_file(p);
                }
                return Err(anyhow!(e).context(format!("writing {}", path.display())));
            }
            written.push(path);
        }
        Ok(written)
    }
}

pub fn load(settings: &Settings) -> Result<PointCloud> {
    let cloud = match &settings.source {
        Source::File { path, dim } => parse_points(path, *dim)?,
        Source::Generated(spec) => {
            if let Some(dim) = spec_dim(settings) {
                if dim != spec.kind.dim() {
                    bail!("generator `{}` produces {}-dimensional sites, not {dim}", spec.kind, spec.kind.dim());
                }
            }
            generate(spec)?
        }
    };
    Ok(match settings.jitter {
        Some((magnitude, seed)) => cloud.jittered(magnitude, 9, seed),
        None => cloud,
    })
}

fn spec_dim(settings: &Settings) -> Option<usize> {
    match &settings.source {
        Source::File { dim, .. } => *dim,
        Source::Generated(_) => None,
    }
}

/// The deepest depth analyses may ask about.
pub fn depth_cap(settings: &Settings, cloud: &PointCloud) -> Result<usize> {
    let k = settings.max_k.unwrap_or(cloud.n());
    if k < 1 {
        bail!("--max-k must be at least 1");
    }
    Ok(k.min(cloud.n()))
}

/// Every cell with vertex depth up to `k + dim`; the deeper levels are
/// needed to describe depths up to `k` exactly.
pub fn tiling(cloud: &PointCloud, k: usize) -> Result<RhomboidTiling> {
    let cap = (k + cloud.dim()).min(cloud.n());
    info!("enumerating rhomboids of {} sites down to depth {cap}", cloud.n());
    Ok(enumerate_truncated(cloud, cap)?)
}

/// The chosen model on depths `1..=k`, with cells up to dimension
/// `max_dim` where the model allows a bound.
pub fn build(t: &RhomboidTiling, model: Model, k: usize, max_dim: usize) -> Result<BigradedComplex> {
    let c = match model {
        Model::Rhomb => build_rhomb(t).restrict_depth(k)?,
        Model::SRhomb => build_srhomb(&slice_tiling(t)?).truncate(k)?,
        Model::SDel => build_sdel_up_to(&slice_tiling(t)?, Some(max_dim)).truncate(k)?,
        Model::CechOracle => bail!("the oracle is not built from a tiling"),
    };
    info!("{model}: {} cells", c.len());
    Ok(c)
}

/// Either a built complex or the brute-force oracle, which is evaluated one
/// depth at a time.
pub enum Analysis<'a> {
    Complex(BigradedComplex),
    Oracle(&'a PointCloud),
}

impl Analysis<'_> {
    pub fn grid(&self, radii: &[Rational], ks: &[usize], dims: &[usize]) -> Result<HilbertGrid> {
        match self {
            Analysis::Complex(c) => Ok(hilbert(c, radii, ks, dims)),
            Analysis::Oracle(cloud) => {
                let max_dim = dims.iter().max().map_or(1, |d| d + 1);
                // profiles[ki][di][ri]
                let profiles = ks
                    .iter()
                    .map(|&k| {
                        let nerve = cech_multicover_nerve(cloud, k, max_dim)?;
                        dims.iter()
                            .map(|&i| nerve.betti_profile(radii, i))
                            .collect::<Result<Vec<_>, OracleError>>()
                    })
                    .collect::<Result<Vec<_>, OracleError>>()?;
                Ok(HilbertGrid::tabulate(radii.to_vec(), ks.to_vec(), dims.to_vec(), |ri, ki| {
                    profiles[ki].iter().map(|p| p[ri]).collect()
                }))
            }
        }
    }

    pub fn barcode(&self, k: usize, i: usize) -> Result<Barcode> {
        match self {
            Analysis::Complex(c) => Ok(barcode_fixed_k(c, k, i)),
            Analysis::Oracle(cloud) => Ok(cech_multicover_nerve(cloud, k, i + 1)?.barcode(i)?),
        }
    }

    fn largest_radius_sq(&self) -> Result<Rational> {
        match self {
            Analysis::Complex(c) => Ok(c.radii().last().cloned().unwrap_or_default()),
            Analysis::Oracle(cloud) => Ok(cloud.meb_radius_sq()?),
        }
    }
}

pub fn analysis<'a>(
    cloud: &'a PointCloud,
    model: Model,
    k: usize,
    dims: &[usize],
) -> Result<Analysis<'a>> {
    if model == Model::CechOracle {
        return Ok(Analysis::Oracle(cloud));
    }
    let t = tiling(cloud, k).context("stage `tiling`")?;
    let max_dim = dims.iter().max().map_or(1, |d| d + 1);
    let c = build(&t, model, k, max_dim).context("stage `model`")?;
    Ok(Analysis::Complex(c))
}

/// The requested radius grid as squared radii; by default 20 radii up to
/// the largest critical radius.
pub fn radii(settings: &Settings, a: &Analysis<'_>) -> Result<Vec<Rational>> {
    Ok(match &settings.r_grid {
        Some(g) => g.squared(),
        None => {
            let grid = SnapGrid {
                n: 20,
                max_sq: a.largest_radius_sq()?,
            };
            (0..grid.n).map(|j| grid.value(j)).collect()
        }
    })
}

pub fn depths(settings: &Settings, k: usize) -> Result<Vec<usize>> {
    let (a, b) = settings.k_range.unwrap_or((1, k));
    if b > k {
        bail!("depth range ends at {b}, past the analysed depth {k}; raise --max-k");
    }
    Ok((a..=b).collect())
}

pub fn run_generate(settings: &Settings, out: &mut Outputs) -> Result<()> {
    let cloud = load(settings).context("stage `input`")?;
    out.add("points.txt", write_points(&cloud));
    Ok(())
}

pub fn run_tiling(settings: &Settings, out: &mut Outputs) -> Result<()> {
    let cloud = load(settings).context("stage `input`")?;
    let k = depth_cap(settings, &cloud)?;
    let t = tiling(&cloud, k).context("stage `tiling`")?;
    out.add("tiling.json", tiling_json(&t).context("stage `output`")?);
    Ok(())
}

pub fn run_betti(settings: &Settings, radius: &RadiusGrid, out: &mut Outputs) -> Result<()> {
    let cloud = load(settings).context("stage `input`")?;
    let k = depth_cap(settings, &cloud)?;
    let a = analysis(&cloud, settings.model, k, &settings.hom_dims)?;
    let ks = depths(settings, k)?;
    let h = a.grid(&radius.squared(), &ks, &settings.hom_dims).context("stage `homology`")?;
    out.add("betti.csv", hilbert_csv(&h));
    Ok(())
}

pub fn run_barcode(settings: &Settings, out: &mut Outputs) -> Result<()> {
    let cloud = load(settings).context("stage `input`")?;
    let k = depth_cap(settings, &cloud)?;
    let a = analysis(&cloud, settings.model, k, &settings.hom_dims)?;
    for depth in depths(settings, k)? {
        let mut bars = Vec::new();
        for &i in &settings.hom_dims {
            bars.extend(a.barcode(depth, i).context("stage `homology`")?.bars().iter().cloned());
        }
        out.add(format!("barcode_k{depth}.txt"), barcode_text(&Barcode::new(bars)));
    }
    Ok(())
}

pub fn run_hilbert(settings: &Settings, saturate: Option<usize>, out: &mut Outputs) -> Result<()> {
    let cloud = load(settings).context("stage `input`")?;
    let k = depth_cap(settings, &cloud)?;
    let a = analysis(&cloud, settings.model, k, &settings.hom_dims)?;
    let radii = radii(settings, &a)?;
    let h = a
        .grid(&radii, &depths(settings, k)?, &settings.hom_dims)
        .context("stage `homology`")?;
    out.add("hilbert.csv", hilbert_csv(&h));
    let saturate = saturate.unwrap_or_else(|| h.max());
    for (di, i) in settings.hom_dims.iter().enumerate() {
        out.add(format!("hilbert_h{i}.pgm"), hilbert_pgm(&h, di, saturate));
    }
    Ok(())
}

pub fn run_firep(settings: &Settings, out: &mut Outputs) -> Result<()> {
    let cloud = load(settings).context("stage `input`")?;
    let k = depth_cap(settings, &cloud)?;
    if !settings.model.is_one_critical() {
        bail!(
            "stage `firep`: {} is not one-critical; FIREP export needs rhomb or srhomb",
            settings.model
        );
    }
    let Analysis::Complex(c) = analysis(&cloud, settings.model, k, &settings.hom_dims)? else {
        unreachable!("one-critical models are built from the tiling")
    };
    let c = if settings.snap > 0 {
        c.snap_grades(settings.snap).context("stage `snap`")?
    } else {
        c
    };
    for &i in &settings.hom_dims {
        let doc = assemble_firep(&c, i).context("stage `firep`")?;
        out.add(format!("firep_h{i}.txt"), doc.to_text());
    }
    Ok(())
}

pub fn run_stats(settings: &Settings, out: &mut Outputs) -> Result<String> {
    let cloud = load(settings).context("stage `input`")?;
    let k = depth_cap(settings, &cloud)?;
    let t = tiling(&cloud, k).context("stage `tiling`")?;
    let mut report = json!({
        "n": cloud.n(),
        "dim": cloud.dim(),
        "max_k": k,
        "tiling": tiling_stats(&t),
    });
    if settings.model != Model::CechOracle {
        let max_dim = settings.hom_dims.iter().max().map_or(1, |d| d + 1);
        let c = build(&t, settings.model, k, max_dim).context("stage `model`")?;
        let mut by_dim = vec![0usize; c.top_dim().map_or(0, |d| d + 1)];
        for cell in c.cells() {
            by_dim[cell.dim] += 1;
        }
        let mut model = json!({
            "name": settings.model.to_string(),
            "cells": c.len(),
            "cells_by_dim": by_dim,
        });
        if settings.model.is_one_critical() {
            let gens = settings
                .hom_dims
                .iter()
                .map(|&i| Ok(assemble_firep(&c, i)?.generator_count()))
                .collect::<Result<Vec<_>>>()
                .context("stage `firep`")?;
            model["firep_generators"] = json!(gens);
        }
        report["model"] = model;
    }
    let text = serde_json::to_string_pretty(&report)? + "\n";
    out.add("stats.json", text.clone());
    Ok(text)
}

/// Compare every model with the oracle on the radius grid and depth range.
/// Returns the report and whether everything agreed.
pub fn run_validate(settings: &Settings, out: &mut Outputs) -> Result<bool> {
    let cloud = load(settings).context("stage `input`")?;
    let k = depth_cap(settings, &cloud)?;
    let dims = &settings.hom_dims;
    let t = tiling(&cloud, k).context("stage `tiling`")?;
    let max_dim = dims.iter().max().map_or(1, |d| d + 1);
    let mut report = format!("sites {} dim {} depths 1..={k}\n", cloud.n(), cloud.dim());
    let mut ok = true;
    let mut models = Vec::new();
    for model in [Model::Rhomb, Model::SRhomb, Model::SDel] {
        let c = build(&t, model, k, max_dim).context("stage `model`")?;
        match c.validate() {
            Ok(()) => report.push_str(&format!("{model}: {} cells, chain complex valid\n", c.len())),
            Err(e) => {
                ok = false;
                report.push_str(&format!("{model}: INVALID: {e}\n"));
            }
        }
        models.push((model, c));
    }
    let oracle = Analysis::Oracle(&cloud);
    let radii = radii(settings, &Analysis::Complex(models[0].1.clone()))?;
    let ks = depths(settings, k)?;
    let want = oracle.grid(&radii, &ks, dims).context("stage `oracle`")?;
    for (model, c) in &models {
        let mut mismatches = 0;
        for (ri, ki, di, v) in want.entries() {
            let got = betti_numbers_at(c, &Bigrade::new(radii[ri].clone(), ks[ki]), &[dims[di]])[0];
            if got != v {
                mismatches += 1;
            }
        }
        ok &= mismatches == 0;
        report.push_str(&format!(
            "{model} vs cech-oracle: {} grades, {mismatches} mismatches\n",
            radii.len() * ks.len() * dims.len()
        ));
    }
    report.push_str(if ok { "result: PASS\n" } else { "result: FAIL\n" });
    out.add("validate.txt", report);
    Ok(ok)
}
