//! Parameter sweeps over the state families and region classification.
//!
//! Grid points are evaluated in parallel but collected by index, so output
//! order and content never depend on the worker count.

use std::io::{Read, Write};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::bases::unit_set;
use crate::choi::{d5_imv1_zero, detection_closed_form, ppt_bound};
use crate::error::{Error, Result};
use crate::states::{choi_state, horodecki_a, horodecki_alpha, ChoiParams, DensityMatrix};
use crate::tolerance::TOL;
use crate::witness::detection_value;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum Classification {
    Npt,
    PptDetected,
    PptUndetected,
    Boundary,
}

impl Classification {
    pub fn as_str(self) -> &'static str {
        match self {
            Classification::Npt => "NPT",
            Classification::PptDetected => "PPT_DETECTED",
            Classification::PptUndetected => "PPT_UNDETECTED",
            Classification::Boundary => "BOUNDARY",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        Some(match s {
            "NPT" => Classification::Npt,
            "PPT_DETECTED" => Classification::PptDetected,
            "PPT_UNDETECTED" => Classification::PptUndetected,
            "BOUNDARY" => Classification::Boundary,
            _ => return None,
        })
    }

    /// `near_ppt_edge` marks points within the boundary band of the PPT bound.
    pub fn from_values(detection_value: f64, ppt: bool, near_ppt_edge: bool) -> Self {
        if detection_value.abs() <= TOL.detection || near_ppt_edge {
            Classification::Boundary
        } else if !ppt {
            Classification::Npt
        } else if detection_value < 0.0 {
            Classification::PptDetected
        } else {
            Classification::PptUndetected
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RegionPoint {
    pub params: Vec<f64>,
    pub detection_value: f64,
    pub ppt: bool,
    pub classification: Classification,
}

/// Classifies an arbitrary state with the numeric partial transpose and the
/// unit-set detection value.
pub fn classify(rho: &DensityMatrix) -> Result<RegionPoint> {
    let ua = unit_set(rho.dim_a())?;
    let ub = unit_set(rho.dim_b())?;
    let value = detection_value(rho, &ua, &ub)?.value;
    let min_pt = rho.min_partial_transpose_eigenvalue()?;
    let ppt = min_pt >= -TOL.ppt;
    let classification = if !ppt {
        Classification::Npt
    } else {
        Classification::from_values(value, true, false)
    };
    Ok(RegionPoint { params: Vec::new(), detection_value: value, ppt, classification })
}

/// Inclusive linear grid of `steps` points.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Grid {
    pub start: f64,
    pub stop: f64,
    pub steps: usize,
}

impl Grid {
    pub fn new(start: f64, stop: f64, steps: usize) -> Self {
        Self { start, stop, steps }
    }

    pub fn points(&self) -> Vec<f64> {
        match self.steps {
            0 => Vec::new(),
            1 => vec![self.start],
            n => (0..n)
                .map(|i| {
                    if i == n - 1 {
                        self.stop
                    } else {
                        self.start + (self.stop - self.start) * i as f64 / (n - 1) as f64
                    }
                })
                .collect(),
        }
    }
}

/// Result of a sweep; `skipped` counts invalid parameter combinations.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScanOutput {
    pub family: String,
    pub d: usize,
    pub param_names: Vec<String>,
    pub points: Vec<RegionPoint>,
    pub skipped: usize,
}

impl ScanOutput {
    pub fn count(&self, c: Classification) -> usize {
        self.points.iter().filter(|p| p.classification == c).count()
    }

    pub fn summary(&self) -> String {
        format!(
            "{} points ({} skipped): NPT={} PPT_DETECTED={} PPT_UNDETECTED={} BOUNDARY={}",
            self.points.len(),
            self.skipped,
            self.count(Classification::Npt),
            self.count(Classification::PptDetected),
            self.count(Classification::PptUndetected),
            self.count(Classification::Boundary),
        )
    }
}

fn collect_points(
    count: usize,
    eval: impl Fn(usize) -> Result<Option<RegionPoint>> + Sync + Send,
) -> Result<(Vec<RegionPoint>, usize)> {
    let results: Vec<Option<RegionPoint>> = (0..count).into_par_iter().map(eval).collect::<Result<_>>()?;
    let skipped = results.iter().filter(|r| r.is_none()).count();
    Ok((results.into_iter().flatten().collect(), skipped))
}

/// Sweeps a one-parameter family (`horodecki-alpha` or `horodecki-a`).
pub fn scan_1d(family: &str, grid: Grid) -> Result<ScanOutput> {
    let (name, build): (&str, fn(f64) -> Result<DensityMatrix>) = match family {
        "horodecki-alpha" => ("alpha", horodecki_alpha),
        "horodecki-a" => ("a", horodecki_a),
        other => return Err(Error::UnknownFamily(other.to_string())),
    };
    let xs = grid.points();
    let (points, skipped) = collect_points(xs.len(), |i| {
        let rho = match build(xs[i]) {
            Ok(r) => r,
            Err(Error::Parameter(_)) => return Ok(None),
            Err(e) => return Err(e),
        };
        let mut point = classify(&rho)?;
        point.params = vec![xs[i]];
        Ok(Some(point))
    })?;
    Ok(ScanOutput { family: family.to_string(), d: 3, param_names: vec![name.to_string()], points, skipped })
}

/// Grid for [`scan_choi`]. The two weight axes are `mu_1` (d=3), `mu_1, mu_3`
/// (d=4, `mu_2` from the sum) or `mu_3, mu_4` (d=5 on the `Im V_1 = 0` locus).
/// `p` runs over `p_steps` points in `[0, 1/d]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ChoiScan {
    pub d: usize,
    pub mu_steps: usize,
    pub p_steps: usize,
    /// Use the SVD of the correlation matrix instead of the closed form.
    pub use_svd: bool,
}

impl ChoiScan {
    pub fn new(d: usize) -> Self {
        Self { d, mu_steps: 200, p_steps: 100, use_svd: false }
    }
}

fn choi_weights(d: usize, axes: &[f64]) -> Option<Vec<f64>> {
    match d {
        3 => Some(vec![axes[0], 1.0 - axes[0]]),
        4 => {
            let mu2 = 1.0 - axes[0] - axes[1];
            (mu2 >= -1e-12).then(|| vec![axes[0], mu2.max(0.0), axes[1]])
        }
        5 => d5_imv1_zero(axes[0], axes[1]).ok(),
        _ => None,
    }
}

/// Evaluates one Choi parameter point.
pub fn choi_point(params: &ChoiParams, use_svd: bool) -> Result<RegionPoint> {
    let d = params.d();
    let value = if use_svd {
        let u = unit_set(d)?;
        detection_value(&choi_state(params)?, &u, &u)?.value
    } else {
        detection_closed_form(params)
    };
    let bound = ppt_bound(params.mu(), d)?;
    let ppt = params.p() <= bound + TOL.ppt_boundary;
    let near_edge = (params.p() - bound).abs() <= TOL.ppt_boundary;
    Ok(RegionPoint {
        params: Vec::new(),
        detection_value: value,
        ppt,
        classification: Classification::from_values(value, ppt, near_edge),
    })
}

pub fn scan_choi(config: ChoiScan) -> Result<ScanOutput> {
    let d = config.d;
    let axis = Grid::new(0.0, 1.0, config.mu_steps).points();
    let ps = Grid::new(0.0, 1.0 / d as f64, config.p_steps).points();
    let param_names: Vec<String> = match d {
        3 => vec!["mu1", "p"],
        4 => vec!["mu1", "mu3", "p"],
        5 => vec!["mu3", "mu4", "p"],
        _ => return Err(Error::Parameter(format!("Choi scans support d in {{3, 4, 5}}, got {d}"))),
    }
    .into_iter()
    .map(String::from)
    .collect();

    // row-major over (axes.., p), p fastest
    let (na, np) = (axis.len(), ps.len());
    let count = if d == 3 { na * np } else { na * na * np };
    let (points, skipped) = collect_points(count, |idx| {
        let p = ps[idx % np];
        let c = if d == 3 {
            vec![axis[idx / np], p]
        } else {
            vec![axis[idx / (na * np)], axis[(idx / np) % na], p]
        };
        let axes = &c[..c.len() - 1];
        let Some(mu) = choi_weights(d, axes) else { return Ok(None) };
        let params = match ChoiParams::new(d, p, mu) {
            Ok(x) => x,
            Err(Error::Parameter(_)) => return Ok(None),
            Err(e) => return Err(e),
        };
        let mut point = choi_point(&params, config.use_svd)?;
        point.params = c;
        Ok(Some(point))
    })?;
    Ok(ScanOutput { family: "choi".into(), d, param_names, points, skipped })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Format {
    Csv,
    Json,
}

fn sci(x: f64) -> String {
    format!("{x:.16e}")
}

/// Writes `family, d, <params..>, detection_value, ppt, classification` rows.
pub fn write_csv<W: Write>(out: &ScanOutput, writer: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(writer);
    let mut header = vec!["family".to_string(), "d".to_string()];
    header.extend(out.param_names.iter().cloned());
    header.extend(["detection_value", "ppt", "classification"].map(String::from));
    w.write_record(&header)?;
    for point in &out.points {
        let mut row = vec![out.family.clone(), out.d.to_string()];
        row.extend(point.params.iter().map(|&x| sci(x)));
        row.push(sci(point.detection_value));
        row.push(if point.ppt { "1" } else { "0" }.to_string());
        row.push(point.classification.as_str().to_string());
        w.write_record(&row)?;
    }
    w.flush()?;
    Ok(())
}

pub fn write_json<W: Write>(out: &ScanOutput, writer: W) -> Result<()> {
    serde_json::to_writer_pretty(writer, out)?;
    Ok(())
}

pub fn emit<W: Write>(out: &ScanOutput, format: Format, writer: W) -> Result<()> {
    match format {
        Format::Csv => write_csv(out, writer),
        Format::Json => write_json(out, writer),
    }
}

pub fn emit_to_path(out: &ScanOutput, format: Format, path: impl AsRef<std::path::Path>) -> Result<()> {
    let file = std::io::BufWriter::new(std::fs::File::create(path)?);
    emit(out, format, file)
}

/// Parses CSV written by [`write_csv`].
pub fn read_csv<R: Read>(reader: R) -> Result<ScanOutput> {
    let mut r = csv::Reader::from_reader(reader);
    let header: Vec<String> = r.headers()?.iter().map(String::from).collect();
    if header.len() < 5 || header[0] != "family" || header[1] != "d" {
        return Err(Error::Parameter("not a scan CSV".into()));
    }
    let n_params = header.len() - 5;
    let param_names = header[2..2 + n_params].to_vec();
    let bad = |what: &str| Error::Parameter(format!("malformed scan CSV field: {what}"));
    let mut family = String::new();
    let mut d = 0;
    let mut points = Vec::new();
    for rec in r.records() {
        let rec = rec?;
        family = rec[0].to_string();
        d = rec[1].parse().map_err(|_| bad("d"))?;
        let params = (0..n_params)
            .map(|i| rec[2 + i].parse::<f64>().map_err(|_| bad(&param_names[i])))
            .collect::<Result<Vec<_>>>()?;
        let detection_value = rec[2 + n_params].parse().map_err(|_| bad("detection_value"))?;
        let ppt = match &rec[3 + n_params] {
            "1" => true,
            "0" => false,
            _ => return Err(bad("ppt")),
        };
        let classification = Classification::parse(&rec[4 + n_params]).ok_or_else(|| bad("classification"))?;
        points.push(RegionPoint { params, detection_value, ppt, classification });
    }
    Ok(ScanOutput { family, d, param_names, points, skipped: 0 })
}
