use crate::config::{DensityConfig, DensityLaw, GridSpec, RunConfig, SimulateConfig, VerifyConfig};
use crate::error::{CliError, CliResult};
use fracmotion_core::densities::{
    conditional_density, flight_unconditional, line_density, planar_density_const_rate, planar_law, sonine_density,
};
use fracmotion_core::motion::batch_endpoints;
use fracmotion_core::specfun::{ln_mittag_leffler, MLParams, SeriesControl};
use fracmotion_core::verify::run_suite;
use fracmotion_core::{FlightCountSpec, FracPoissonSpec, MotionConfig, VerificationReport};
use serde_json::{json, Value};
use std::fmt::Write as _;
use std::fs;
use std::io::Write as _;
use std::path::Path;
use std::time::{SystemTime, UNIX_EPOCH};

/// What a command left behind, for the caller to report.
#[derive(Debug, Clone, PartialEq)]
pub enum Outcome {
    Simulated { rows: usize },
    Density { rows: usize, nan_rows: usize },
    Verified(VerificationReport),
}

pub fn run(cfg: &RunConfig) -> CliResult<Outcome> {
    cfg.validate()?;
    match cfg {
        RunConfig::Simulate(s) => simulate(cfg, s),
        RunConfig::Density(d) => density(cfg, d),
        RunConfig::Verify(v) => verify(v),
    }
}

fn versions() -> Value {
    json!({
        "fracmotion_cli": env!("CARGO_PKG_VERSION"),
        "fracmotion_core": fracmotion_core::VERSION,
    })
}

fn write_file(path: &Path, contents: &[u8]) -> CliResult<()> {
    if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
        fs::create_dir_all(dir).map_err(|e| CliError::io(dir, e))?;
    }
    let mut f = fs::File::create(path).map_err(|e| CliError::io(path, e))?;
    f.write_all(contents).map_err(|e| CliError::io(path, e))
}

fn unix_seconds() -> u64 {
    SystemTime::now().duration_since(UNIX_EPOCH).map_or(0, |d| d.as_secs())
}

fn simulate(cfg: &RunConfig, s: &SimulateConfig) -> CliResult<Outcome> {
    let mut motion = MotionConfig::new(s.c, s.t, s.count.clone()).map_err(|e| CliError::from_core("simulate", e))?;
    motion.instants = s.instants;
    let samples =
        batch_endpoints(&motion, s.samples, s.seed, s.workers).map_err(|e| CliError::from_core("simulate", e))?;
    let mut csv = String::with_capacity(48 * samples.len() + 16);
    csv.push_str("x,y,n,is_singular\n");
    for p in &samples {
        writeln!(csv, "{},{},{},{}", p.x, p.y, p.n, u8::from(p.is_singular)).expect("writing to a String");
    }
    write_file(&s.output, csv.as_bytes())?;
    let manifest = json!({
        "seed": s.seed,
        "samples": s.samples,
        "output": s.output.display().to_string(),
        "config": serde_json::to_value(cfg).expect("serializable config"),
        "versions": versions(),
        "created_unix": unix_seconds(),
    });
    write_file(&s.manifest, pretty(&manifest).as_bytes())?;
    Ok(Outcome::Simulated { rows: samples.len() })
}

fn pretty(v: &Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("plain JSON value");
    s.push('\n');
    s
}

/// `(coordinates, density)` rows; `None` marks a point off the support.
type Rows = Vec<(Vec<f64>, Option<f64>)>;

fn grid_points(grid: &GridSpec, ct: f64) -> (Vec<&'static str>, Vec<Vec<f64>>) {
    match *grid {
        GridSpec::Radial { points, from, to } => {
            let (a, b) = (from.unwrap_or(0.0), to.unwrap_or(ct));
            let pts = (0..points).map(|i| vec![a + (b - a) * i as f64 / points as f64]).collect();
            (vec!["r"], pts)
        }
        GridSpec::Line { points, from, to } => {
            let (a, b) = (from.unwrap_or(-ct), to.unwrap_or(ct));
            let pts = (0..points).map(|i| vec![a + (b - a) * (i as f64 + 0.5) / points as f64]).collect();
            (vec!["x"], pts)
        }
        GridSpec::Cartesian { points, half_width } => {
            let axis = |i: usize| {
                if points == 1 {
                    0.0
                } else {
                    -half_width + 2.0 * half_width * i as f64 / (points - 1) as f64
                }
            };
            let pts = (0..points).flat_map(|j| (0..points).map(move |i| vec![axis(i), axis(j)])).collect();
            (vec!["x", "y"], pts)
        }
    }
}

fn radius_of(p: &[f64]) -> f64 {
    match p {
        [r] => r.abs(),
        [x, y] => x.hypot(*y),
        _ => f64::NAN,
    }
}

fn core(e: fracmotion_core::Error) -> CliError {
    CliError::from_core("density", e)
}

fn evaluate(law: &DensityLaw, pts: Vec<Vec<f64>>) -> CliResult<(Rows, Option<f64>)> {
    let ct = law.ct();
    let inside = |p: &[f64]| radius_of(p) < ct;
    let mut rows = Rows::with_capacity(pts.len());
    let mut push = |p: Vec<f64>, f: &dyn Fn(&[f64]) -> fracmotion_core::Result<f64>| -> CliResult<()> {
        let v = if inside(&p) { Some(f(&p).map_err(core)?) } else { None };
        rows.push((p, v));
        Ok(())
    };
    let singular = match law {
        DensityLaw::Planar { alpha, rate, c, t } => {
            let spec = FracPoissonSpec::new(*alpha, rate.clone()).map_err(core)?;
            let pl = planar_law(&spec, *c, *t).map_err(core)?;
            for p in pts {
                push(p, &|p| pl.ac_density_radial(radius_of(p)))?;
            }
            Some(pl.singular_weight())
        }
        DensityLaw::PlanarConstRate { alpha, lambda, c, t } => {
            for p in pts {
                push(p, &|p| planar_density_const_rate(*alpha, *lambda, *c, *t, radius_of(p), 0.0))?;
            }
            let ln_e =
                ln_mittag_leffler(MLParams::new(*alpha, 1.0).map_err(core)?, lambda * t, &SeriesControl::default())
                    .map_err(core)?;
            Some((-ln_e).exp())
        }
        DensityLaw::Conditional { n, c, t } => {
            for p in pts {
                push(p, &|p| conditional_density(*n, *c, *t, radius_of(p)))?;
            }
            None
        }
        DensityLaw::Line { alpha, rate, c, t } => {
            let spec = FracPoissonSpec::new(*alpha, rate.clone()).map_err(core)?;
            for p in pts {
                push(p, &|p| line_density(&spec, *c, *t, p[0]))?;
            }
            None
        }
        DensityLaw::Sonine { lambda, c, t } => {
            for p in pts {
                push(p, &|p| sonine_density(lambda * t, *c, *t, p[0]))?;
            }
            None
        }
        DensityLaw::Flight { d, rate, c, t } => {
            let spec = FlightCountSpec::new(*d, rate.clone()).map_err(core)?;
            for p in pts {
                push(p, &|p| flight_unconditional(&spec, *c, *t, radius_of(p)))?;
            }
            None
        }
    };
    Ok((rows, singular))
}

fn density(cfg: &RunConfig, d: &DensityConfig) -> CliResult<Outcome> {
    let (names, pts) = grid_points(&d.grid, d.law.ct());
    let (rows, singular) = evaluate(&d.law, pts)?;
    let mut csv = format!("{},density\n", names.join(","));
    let mut nan_rows = 0;
    for (p, v) in &rows {
        for x in p {
            write!(csv, "{x},").expect("writing to a String");
        }
        match v {
            Some(v) => writeln!(csv, "{v}"),
            None => {
                nan_rows += 1;
                writeln!(csv, "nan")
            }
        }
        .expect("writing to a String");
    }
    write_file(&d.output, csv.as_bytes())?;
    let mut sidecar = json!({
        "rows": rows.len(),
        "nan_rows": nan_rows,
        "support_radius": d.law.ct(),
        "output": d.output.display().to_string(),
        "config": serde_json::to_value(cfg).expect("serializable config"),
        "versions": versions(),
    });
    if let Some(w) = singular {
        sidecar["singular_weight"] = json!(w);
    }
    write_file(&d.sidecar, pretty(&sidecar).as_bytes())?;
    Ok(Outcome::Density { rows: rows.len(), nan_rows })
}

fn verify(v: &VerifyConfig) -> CliResult<Outcome> {
    let report = run_suite(&v.suite).map_err(|e| CliError::from_core("verify", e))?;
    let mut js = report.to_json_pretty();
    js.push('\n');
    write_file(&v.output, js.as_bytes())?;
    Ok(Outcome::Verified(report))
}
