use std::f64::consts::TAU;
use std::path::{Path, PathBuf};

use anyhow::{bail, ensure, Context, Result};
use serde::Serialize;

use srgcert::cpl::CplParams;
use srgcert::criteria::{
    certify_linear, certify_with_cpl, compare, critical_scr, margin_profile, scr_grid, srg_at, CertificationReport,
    Comparison, CscrResult,
};
use srgcert::grid::{load_network, save_frequency_data, FrequencyDataSet, NetworkCase, ReducedGrid};
use srgcert::io::{boundary_csv, fmt17};
use srgcert::lti::{load_model, ModelDocument, SampledResponse, Spacing, TransferMatrixModel};
use srgcert::srg::{default_tau_grid, srg_sample_oracle, tau_swept_region};
use srgcert::{CertifyOptions, FrequencyGrid, FrequencyResponse, Verdict};

use crate::output::{short, Document, GridSpec, InputFile, OutDir, Provenance};
use crate::{CertifyArgs, CertifyCplArgs, CommonArgs, CscrArgs, ExportArgs, FreqArgs, GridSource, KronArgs};

const DEFAULT_BAND_HZ: (f64, f64) = (1e-2, 1e3);
const DEFAULT_POINTS: usize = 400;

pub fn exit_code(v: Verdict) -> u8 {
    match v {
        Verdict::Certified => 0,
        Verdict::NotCertified => 2,
        Verdict::Indeterminate => 3,
    }
}

/// The default band plus the fundamental, or the band given on the command line.
fn frequency_grid(a: &FreqArgs) -> Result<(FrequencyGrid, GridSpec)> {
    ensure!(a.f0.is_finite() && a.f0 > 0.0, "--f0 must be a positive frequency in Hz");
    let custom = a.fmin.is_some() || a.fmax.is_some() || a.npoints.is_some() || a.spacing.is_some();
    let grid = if custom {
        FrequencyGrid::from_hz(
            a.fmin.unwrap_or(DEFAULT_BAND_HZ.0),
            a.fmax.unwrap_or(DEFAULT_BAND_HZ.1),
            a.npoints.unwrap_or(DEFAULT_POINTS),
            a.spacing.unwrap_or(Spacing::Log),
        )
        .context("invalid frequency grid (--fmin/--fmax/--npoints/--spacing)")?
    } else {
        FrequencyGrid::default_with_fundamental(TAU * a.f0)
    };
    let spec = GridSpec {
        f_min_hz: custom.then(|| a.fmin.unwrap_or(DEFAULT_BAND_HZ.0)),
        f_max_hz: custom.then(|| a.fmax.unwrap_or(DEFAULT_BAND_HZ.1)),
        points: grid.len(),
        spacing: custom.then(|| a.spacing.unwrap_or(Spacing::Log)),
        fundamental_hz: a.f0,
    };
    Ok((grid, spec))
}

fn options(c: &CommonArgs) -> Result<CertifyOptions> {
    ensure!(c.tau_points >= 1, "--tau-points must be at least 1");
    Ok(CertifyOptions {
        tau_grid: default_tau_grid(c.tau_points),
        ..CertifyOptions::default()
    })
}

fn load(role: &str, path: &Path, inputs: &mut Vec<InputFile>) -> Result<TransferMatrixModel> {
    let (model, _) = load_model(path).with_context(|| format!("loading {role} model {}", path.display()))?;
    inputs.push(InputFile::hash(role, path)?);
    Ok(model)
}

fn network(path: &Path, boundary: Option<&Vec<usize>>, inputs: &mut Vec<InputFile>) -> Result<NetworkCase> {
    let mut case = load_network(path).with_context(|| format!("loading network case {}", path.display()))?;
    if let Some(b) = boundary {
        case = case.with_boundary(b.clone()).context("invalid --boundary")?;
    }
    inputs.push(InputFile::hash("network", path)?);
    Ok(case)
}

fn grid_model(
    grid: Option<&PathBuf>,
    net: Option<&PathBuf>,
    scr: Option<f64>,
    boundary: Option<&Vec<usize>>,
    dim: usize,
    inputs: &mut Vec<InputFile>,
) -> Result<Option<Box<dyn FrequencyResponse>>> {
    Ok(match (grid, net, scr) {
        (Some(p), None, None) => Some(Box::new(load("grid", p, inputs)?)),
        (None, Some(p), None) => Some(Box::new(ReducedGrid(network(p, boundary, inputs)?))),
        (None, None, Some(s)) => {
            ensure!(s.is_finite() && s > 0.0, "--scr must be a positive number");
            Some(Box::new(scr_grid(s, dim)))
        }
        (None, None, None) => None,
        _ => bail!("give exactly one of --grid, --network or --scr"),
    })
}

fn source(s: &GridSource, boundary: Option<&Vec<usize>>, dim: usize, inputs: &mut Vec<InputFile>) -> Result<Box<dyn FrequencyResponse>> {
    grid_model(s.grid.as_ref(), s.network.as_ref(), s.scr, boundary, dim, inputs)?
        .context("give exactly one of --grid, --network or --scr")
}

fn verdict_line(r: &CertificationReport) -> String {
    format!(
        "{}: worst margin {} at {} Hz",
        r.verdict,
        short(r.worst.margin),
        short(r.worst.f_hz)
    )
}

/// Writes `report.json` and `margin.csv`, prints the verdict line.
fn finish<T: Serialize>(out: &OutDir, prov: &Provenance, report: &CertificationReport, body: T) -> Result<u8> {
    out.write_json("report.json", &Document { provenance: prov, body })?;
    out.write("margin.csv", &margin_profile(report))?;
    println!("{}", verdict_line(report));
    Ok(exit_code(report.verdict))
}

#[derive(Serialize)]
struct ReportBody<'a> {
    report: &'a CertificationReport,
}

#[derive(Serialize)]
struct CompareBody<'a> {
    comparison: &'a Comparison,
}

pub fn certify(a: &CertifyArgs, with_classics: bool) -> Result<u8> {
    let (grid, spec) = frequency_grid(&a.common.freq)?;
    let opts = options(&a.common)?;
    let mut inputs = Vec::new();
    let yc = load("converter", &a.converter, &mut inputs)?;
    let yg = source(&a.source, a.boundary.as_ref(), yc.dim(), &mut inputs)?;
    let command = if with_classics { "compare" } else { "certify" };
    let prov = Provenance::new(command, inputs, spec, opts.tau_grid.clone(), a.common.seed);
    let out = OutDir::create(&a.common.out)?;
    if with_classics {
        let cmp = compare(&yc, yg.as_ref(), &grid, &opts)?;
        let table = cmp.table();
        out.write("comparison.txt", &table)?;
        print!("{table}");
        finish(&out, &prov, &cmp.report, CompareBody { comparison: &cmp })
    } else {
        let report = certify_linear(&yc, yg.as_ref(), &grid, &opts)?;
        finish(&out, &prov, &report, ReportBody { report: &report })
    }
}

pub fn certify_cpl(a: &CertifyCplArgs) -> Result<u8> {
    let [p, q, v_min] = a.cpl[..] else {
        bail!("--cpl expects three values p,q,vmin, got {}", a.cpl.len());
    };
    let cpl = CplParams::new(p, q, v_min).context("invalid --cpl")?;
    let (grid, spec) = frequency_grid(&a.common.freq)?;
    let opts = options(&a.common)?;
    let mut inputs = Vec::new();
    let yc = load("converter", &a.converter, &mut inputs)?;
    let y_l = load("linear load", &a.grid, &mut inputs)?;
    let prov = Provenance::new("certify-cpl", inputs, spec, opts.tau_grid.clone(), a.common.seed);
    let report = certify_with_cpl(&yc, &y_l, &cpl, a.rho, &grid, &opts)?;
    let out = OutDir::create(&a.common.out)?;
    finish(&out, &prov, &report, ReportBody { report: &report })
}

#[derive(Serialize)]
struct CscrBody<'a> {
    cscr: &'a CscrResult,
}

pub fn cscr(a: &CscrArgs) -> Result<u8> {
    let (grid, spec) = frequency_grid(&a.common.freq)?;
    let opts = options(&a.common)?;
    let mut inputs = Vec::new();
    let yc = load("converter", &a.converter, &mut inputs)?;
    let prov = Provenance::new("cscr", inputs, spec, opts.tau_grid.clone(), a.common.seed);
    let r = critical_scr(&yc, &grid, &opts)?;
    let out = OutDir::create(&a.common.out)?;
    out.write_json("report.json", &Document { provenance: &prov, body: CscrBody { cscr: &r } })?;
    let mut csv = String::from("f_hz,reach\n");
    for (f, x) in r.f_hz.iter().zip(&r.reach) {
        csv.push_str(&format!("{},{}\n", fmt17(*f), fmt17(*x)));
    }
    out.write("reach.csv", &csv)?;
    match (r.cscr, r.critical_f_hz) {
        (Some(v), Some(f)) => println!("cSCR = {} at {} Hz", short(v), short(f)),
        _ => println!("cSCR: no constraint (the swept set never meets the positive real axis)"),
    }
    Ok(0)
}

#[derive(Serialize)]
struct KronBody {
    n_bus: usize,
    boundary: Vec<usize>,
    files: Vec<String>,
}

pub fn kron(a: &KronArgs) -> Result<u8> {
    let (grid, spec) = frequency_grid(&a.common.freq)?;
    let mut inputs = Vec::new();
    let case = network(&a.network, a.boundary.as_ref(), &mut inputs)?;
    let values = grid
        .omegas()
        .iter()
        .map(|&w| case.reduced_admittance(w).with_context(|| format!("reducing at {w} rad/s")))
        .collect::<Result<Vec<_>>>()?;
    let out = OutDir::create(&a.common.out)?;
    let mut files = Vec::new();
    if values[0].dim() == 2 {
        let entries = grid.hz().into_iter().zip(values.iter().cloned()).collect();
        let data = FrequencyDataSet::new(entries, "reduced")?;
        let p = out.path("reduced.csv");
        save_frequency_data(&data, &p)?;
        files.push("reduced.csv".to_string());
    }
    let model = TransferMatrixModel::Sampled(SampledResponse::new(grid.omegas().to_vec(), values)?);
    let doc = ModelDocument::from_model(&model, Some("reduced".into()));
    out.write_json("reduced.json", &doc)?;
    files.push("reduced.json".into());
    let prov = Provenance::new("kron", inputs, spec, Vec::new(), a.common.seed);
    let body = KronBody {
        n_bus: case.n_bus(),
        boundary: case.boundary().to_vec(),
        files,
    };
    out.write_json("report.json", &Document { provenance: &prov, body })?;
    println!(
        "reduced {} buses to boundary {:?} ({}x{}) at {} frequencies",
        case.n_bus(),
        case.boundary(),
        model.dim(),
        model.dim(),
        grid.len()
    );
    Ok(0)
}

#[derive(Serialize)]
struct ExportBody<'a> {
    files: &'a [String],
    #[serde(skip_serializing_if = "Option::is_none")]
    report: Option<&'a CertificationReport>,
}

pub fn srg_export(a: &ExportArgs) -> Result<u8> {
    let (grid, spec) = frequency_grid(&a.common.freq)?;
    let opts = options(&a.common)?;
    let mut inputs = Vec::new();
    let yc = load("converter", &a.converter, &mut inputs)?;
    let yg = grid_model(a.grid.as_ref(), a.network.as_ref(), a.scr, a.boundary.as_ref(), yc.dim(), &mut inputs)?;
    let out = OutDir::create(&a.common.out)?;
    let mut files = Vec::new();
    let f_hz = grid.hz();
    for (k, (&w, &f)) in grid.omegas().iter().zip(&f_hz).enumerate() {
        let base = srg_at(&yc, w, None, &opts.srg)?;
        let swept = tau_swept_region(&base, &opts.tau_grid, true)?;
        let fixed = yg.as_deref().map(|g| srg_at(g, w, None, &opts.srg)).transpose()?;
        let mut rows = vec![(f, "converter", &base), (f, "swept", &swept)];
        if let Some(r) = &fixed {
            rows.push((f, "grid", r));
        }
        let name = format!("boundary/f{k:04}.csv");
        out.write(&name, &boundary_csv(rows))?;
        files.push(name);
        if a.samples > 0 {
            let m = yc.response(w)?;
            let mut csv = String::from("freq_hz,re,im\n");
            for z in srg_sample_oracle(&m, a.samples, a.common.seed.wrapping_add(k as u64)) {
                csv.push_str(&format!("{},{},{}\n", fmt17(f), fmt17(z.re), fmt17(z.im)));
            }
            let name = format!("samples/f{k:04}.csv");
            out.write(&name, &csv)?;
            files.push(name);
        }
    }
    let prov = Provenance::new("srg-export", inputs, spec, opts.tau_grid.clone(), a.common.seed);
    match yg {
        Some(g) => {
            let report = certify_linear(&yc, g.as_ref(), &grid, &opts)?;
            finish(&out, &prov, &report, ExportBody { files: &files, report: Some(&report) })
        }
        None => {
            out.write_json("report.json", &Document { provenance: &prov, body: ExportBody { files: &files, report: None } })?;
            println!("exported SRG boundaries at {} frequencies to {}", grid.len(), a.common.out.display());
            Ok(0)
        }
    }
}
