use std::fs;
use std::path::{Path, PathBuf};

use serde::Serialize;

use crate::config::{Experiment, ExperimentConfig};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Method {
    Analytic,
    Montecarlo,
    BoundLower,
    BoundUpper,
}

impl Method {
    pub fn tag(self) -> &'static str {
        match self {
            Method::Analytic => "analytic",
            Method::Montecarlo => "montecarlo",
            Method::BoundLower => "bound-lower",
            Method::BoundUpper => "bound-upper",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Row {
    pub param: String,
    pub metric: &'static str,
    pub method: Method,
    pub value: f64,
    /// Standard error for simulations, error estimate or nominal tolerance
    /// for quadrature.
    pub uncertainty: f64,
}

impl Row {
    pub fn new(
        param: &str,
        metric: &'static str,
        method: Method,
        value: f64,
        uncertainty: f64,
    ) -> Self {
        Self {
            param: param.to_string(),
            metric,
            method,
            value,
            uncertainty: uncertainty.abs(),
        }
    }
}

/// The CSV table, 17 significant digits per number.
pub fn csv_bytes(rows: &[Row]) -> Vec<u8> {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(["param", "metric", "method", "value", "uncertainty"])
        .expect("in-memory write");
    for r in rows {
        w.write_record([
            r.param.as_str(),
            r.metric,
            r.method.tag(),
            &format!("{:.16e}", r.value),
            &format!("{:.16e}", r.uncertainty),
        ])
        .expect("in-memory write");
    }
    w.into_inner().expect("in-memory write")
}

#[derive(Serialize)]
struct Sidecar<'a> {
    tool: &'static str,
    version: &'static str,
    experiment: Experiment,
    seed: u64,
    rows: usize,
    wall_time_seconds: f64,
    csv: &'a Path,
    config: &'a ExperimentConfig,
}

/// Writes `<dir>/<experiment>.csv` and its JSON sidecar and returns the CSV
/// path.
pub fn write(
    dir: &Path,
    cfg: &ExperimentConfig,
    rows: &[Row],
    wall_time: f64,
) -> std::io::Result<PathBuf> {
    let experiment = cfg.experiment.expect("resolved config");
    fs::create_dir_all(dir)?;
    let csv = dir.join(format!("{experiment}.csv"));
    fs::write(&csv, csv_bytes(rows))?;
    let sidecar = Sidecar {
        tool: env!("CARGO_PKG_NAME"),
        version: env!("CARGO_PKG_VERSION"),
        experiment,
        seed: cfg.seed,
        rows: rows.len(),
        wall_time_seconds: wall_time,
        csv: &csv,
        config: cfg,
    };
    let json = serde_json::to_string_pretty(&sidecar).map_err(std::io::Error::other)?;
    fs::write(dir.join(format!("{experiment}.json")), json + "\n")?;
    Ok(csv)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn csv_has_header_and_full_precision() {
        let rows = [Row::new(
            "link_distance=0.5",
            "success",
            Method::Analytic,
            0.1,
            1e-7,
        )];
        let text = String::from_utf8(csv_bytes(&rows)).unwrap();
        let mut lines = text.lines();
        assert_eq!(lines.next(), Some("param,metric,method,value,uncertainty"));
        let line = lines.next().unwrap();
        assert_eq!(
            line,
            "link_distance=0.5,success,analytic,1.0000000000000001e-1,9.9999999999999995e-8"
        );
        let v: f64 = line.split(',').nth(3).unwrap().parse().unwrap();
        assert_eq!(v, 0.1);
    }
}
