//! Parameter sweeps over the analytical models, written as CSV.
//!
//! A sweep spec is a JSON document:
//!
//! ```json
//! {
//!   "model": "SdnOutage",
//!   "fixed": { "lambda": 8, "mu": 2, "rho": 7, "sigma2": 1 },
//!   "varied": { "symbol": "fs", "grid": [1.0, 1.1, 1.2] },
//!   "series": { "symbol": "p", "values": [0, 0.5, 1] },
//!   "output": "fig2a.csv"
//! }
//! ```
//!
//! Every symbol the model needs must appear in exactly one of `fixed`,
//! `varied` and `series`.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::cran::{CranConfig, DEFAULT_KAPPA_A, DEFAULT_KAPPA_B};
use crate::error::{Error, Result};
use crate::format::format_significant;
use crate::mcc::{clone_capacity_for_qos, clone_capacity_for_rate, MccTask};
use crate::sdn::SdnScenario;
use crate::stats::NormalDeadline;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum SweepModel {
    /// Outage probability of the SDN controller.
    SdnOutage,
    /// Data rate carried by a BBU compute budget.
    CranRate,
    /// Clone capacity versus radio data rate.
    MccCloneVsRate,
    /// Clone capacity versus BBU compute budget.
    MccCloneVsBbu,
}

impl SweepModel {
    pub fn required_symbols(self) -> &'static [&'static str] {
        match self {
            SweepModel::SdnOutage => &["fs", "lambda", "p", "mu", "rho", "sigma2"],
            SweepModel::CranRate => &["fb", "a", "b"],
            SweepModel::MccCloneVsRate => &["r", "tau", "f", "d"],
            SweepModel::MccCloneVsBbu => &["fb", "tau", "f", "d", "a", "b"],
        }
    }

    pub fn optional_symbols(self) -> &'static [&'static str] {
        match self {
            SweepModel::CranRate | SweepModel::MccCloneVsBbu => &["kappa_a", "kappa_b"],
            _ => &[],
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Axis {
    pub symbol: String,
    pub grid: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Series {
    pub symbol: String,
    pub values: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SweepSpec {
    pub model: SweepModel,
    #[serde(default)]
    pub fixed: BTreeMap<String, f64>,
    pub varied: Axis,
    pub series: Series,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub output: Option<PathBuf>,
}

/// Model result at one grid point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Outcome {
    Value(f64),
    Unstable,
    Infeasible,
}

impl fmt::Display for Outcome {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Outcome::Value(v) => f.write_str(&format_significant(*v, 12, true)),
            Outcome::Unstable => f.write_str("UNSTABLE"),
            Outcome::Infeasible => f.write_str("INFEASIBLE"),
        }
    }
}

impl Outcome {
    pub fn value(self) -> Option<f64> {
        match self {
            Outcome::Value(v) => Some(v),
            _ => None,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SweepRow {
    pub series_value: f64,
    pub axis_value: f64,
    pub result: Outcome,
}

impl SweepSpec {
    pub fn from_json(text: &str) -> Result<Self> {
        let spec: SweepSpec = serde_json::from_str(text)?;
        spec.validate()?;
        Ok(spec)
    }

    pub fn from_path(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|source| Error::Io { path: path.into(), source })?;
        Self::from_json(&text)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("sweep specs always serialize")
    }

    pub fn validate(&self) -> Result<()> {
        let spec_err = |msg: String| Err(Error::Config(msg));
        if self.varied.grid.is_empty() {
            return spec_err(format!("axis grid for '{}' is empty", self.varied.symbol));
        }
        if self.varied.grid.iter().any(|v| !v.is_finite()) {
            return spec_err(format!("axis grid for '{}' has non-finite values", self.varied.symbol));
        }
        if self.varied.grid.windows(2).any(|w| w[0] >= w[1]) {
            return spec_err(format!("axis grid for '{}' must be strictly increasing", self.varied.symbol));
        }
        if self.series.values.is_empty() {
            return spec_err(format!("series '{}' has no values", self.series.symbol));
        }
        let mut seen = BTreeSet::new();
        for v in &self.series.values {
            if !v.is_finite() || !seen.insert(v.to_bits()) {
                return spec_err(format!("series '{}' values must be finite and distinct", self.series.symbol));
            }
        }
        if self.varied.symbol == self.series.symbol {
            return spec_err(format!("symbol '{}' is both the axis and the series", self.varied.symbol));
        }

        let required = self.model.required_symbols();
        let optional = self.model.optional_symbols();
        let known = |s: &str| required.contains(&s) || optional.contains(&s);
        for symbol in self.fixed.keys().chain([&self.varied.symbol, &self.series.symbol]) {
            if !known(symbol) {
                return spec_err(format!("symbol '{symbol}' is not used by model {:?}", self.model));
            }
            if self.fixed.contains_key(symbol) && (symbol == &self.varied.symbol || symbol == &self.series.symbol) {
                return spec_err(format!("symbol '{symbol}' is given more than once"));
            }
        }
        for symbol in required {
            let present = self.fixed.contains_key(*symbol) || self.varied.symbol == *symbol || self.series.symbol == *symbol;
            if !present {
                return spec_err(format!("missing symbol '{symbol}' for model {:?}", self.model));
            }
        }
        Ok(())
    }
}

struct Point<'a> {
    fixed: &'a BTreeMap<String, f64>,
    axis: (&'a str, f64),
    series: (&'a str, f64),
}

impl Point<'_> {
    fn get(&self, symbol: &str) -> Option<f64> {
        if self.axis.0 == symbol {
            Some(self.axis.1)
        } else if self.series.0 == symbol {
            Some(self.series.1)
        } else {
            self.fixed.get(symbol).copied()
        }
    }

    fn req(&self, symbol: &str) -> Result<f64> {
        self.get(symbol).ok_or_else(|| Error::Config(format!("missing symbol '{symbol}'")))
    }

    fn antennas(&self) -> Result<u32> {
        let a = self.req("a")?;
        if a.fract() != 0.0 || !(1.0..=u32::MAX as f64).contains(&a) {
            return Err(Error::Config(format!("antenna count 'a' must be a positive integer, got {a}")));
        }
        Ok(a as u32)
    }

    fn cran(&self) -> Result<CranConfig> {
        // M and C do not enter the rate-from-compute relation.
        CranConfig::with_kappas(
            self.antennas()?,
            self.req("b")?,
            6,
            1.0,
            self.get("kappa_a").unwrap_or(DEFAULT_KAPPA_A),
            self.get("kappa_b").unwrap_or(DEFAULT_KAPPA_B),
        )
    }

    fn task(&self) -> Result<MccTask> {
        MccTask::new(self.req("f")?, self.req("d")?, self.req("tau")?)
    }
}

fn evaluate(model: SweepModel, point: &Point<'_>) -> Result<Outcome> {
    let sentinel = |r: Result<f64>| match r {
        Ok(v) => Ok(Outcome::Value(v)),
        Err(Error::InfeasibleRate { .. } | Error::InfeasibleDeadline { .. } | Error::Infeasible(_)) => {
            Ok(Outcome::Infeasible)
        }
        Err(Error::Unstable { .. }) => Ok(Outcome::Unstable),
        Err(e) => Err(e),
    };
    match model {
        SweepModel::SdnOutage => {
            let deadline = NormalDeadline::new(point.req("rho")?, point.req("sigma2")?)?;
            let s = SdnScenario::new(
                point.req("fs")?,
                point.req("lambda")?,
                point.req("p")?,
                point.req("mu")?,
                deadline,
            )?;
            Ok(Outcome::Value(s.outage_probability()))
        }
        SweepModel::CranRate => sentinel(point.cran()?.rate_from_compute(point.req("fb")?)),
        SweepModel::MccCloneVsRate => sentinel(clone_capacity_for_rate(&point.task()?, point.req("r")?)),
        SweepModel::MccCloneVsBbu => {
            sentinel(clone_capacity_for_qos(&point.task()?, &point.cran()?, point.req("fb")?))
        }
    }
}

/// Evaluates the model at every (series, axis) point, series-major.
pub fn run_sweep(spec: &SweepSpec) -> Result<Vec<SweepRow>> {
    spec.validate()?;
    let mut rows = Vec::with_capacity(spec.series.values.len() * spec.varied.grid.len());
    for &series_value in &spec.series.values {
        for &axis_value in &spec.varied.grid {
            let point = Point {
                fixed: &spec.fixed,
                axis: (&spec.varied.symbol, axis_value),
                series: (&spec.series.symbol, series_value),
            };
            let result = evaluate(spec.model, &point).map_err(|e| {
                Error::Config(format!(
                    "{}={series_value}, {}={axis_value}: {e}",
                    spec.series.symbol, spec.varied.symbol
                ))
            })?;
            rows.push(SweepRow { series_value, axis_value, result });
        }
    }
    Ok(rows)
}

/// Writes `series,axis,value` CSV with LF line endings. Series and axis values
/// use the shortest round-trip decimal form; results use 12 significant digits.
pub fn write_csv<W: Write>(rows: &[SweepRow], mut out: W) -> io::Result<()> {
    out.write_all(b"series,axis,value\n")?;
    for row in rows {
        writeln!(out, "{},{},{}", row.series_value, row.axis_value, row.result)?;
    }
    out.flush()
}

pub fn csv_string(rows: &[SweepRow]) -> String {
    let mut buf = Vec::new();
    write_csv(rows, &mut buf).expect("writing to a Vec cannot fail");
    String::from_utf8(buf).expect("CSV output is ASCII")
}

/// Writes the rows to `path`, falling back to the spec's `output` when `path` is `None`.
pub fn emit_csv(rows: &[SweepRow], spec: &SweepSpec, path: Option<&Path>) -> Result<PathBuf> {
    let path = path
        .map(Path::to_path_buf)
        .or_else(|| spec.output.clone())
        .ok_or_else(|| Error::Config("no output path given".into()))?;
    let io_err = |source| Error::Io { path: path.clone(), source };
    let file = File::create(&path).map_err(io_err)?;
    write_csv(rows, BufWriter::new(file)).map_err(io_err)?;
    Ok(path)
}

/// Figure panels with built-in default grids.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Figure {
    /// Outage vs controller capacity, one series per miss probability.
    Fig2a,
    /// Outage vs controller capacity, one series per instruction rate.
    Fig2b,
    /// Rate vs BBU compute, one series per antenna count.
    Fig4a,
    /// Rate vs BBU compute, one series per bandwidth.
    Fig4b,
    /// Clone capacity vs data rate, one series per deadline.
    Fig5a,
    /// Clone capacity vs BBU compute, one series per deadline.
    Fig5b,
}

impl Figure {
    pub const ALL: [Figure; 6] = [Figure::Fig2a, Figure::Fig2b, Figure::Fig4a, Figure::Fig4b, Figure::Fig5a, Figure::Fig5b];

    pub fn name(self) -> &'static str {
        match self {
            Figure::Fig2a => "fig2a",
            Figure::Fig2b => "fig2b",
            Figure::Fig4a => "fig4a",
            Figure::Fig4b => "fig4b",
            Figure::Fig5a => "fig5a",
            Figure::Fig5b => "fig5b",
        }
    }

    pub fn from_name(name: &str) -> Option<Self> {
        Self::ALL.into_iter().find(|f| f.name() == name)
    }
}

/// `n` evenly spaced points from `lo` to `hi` inclusive.
pub fn linspace(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    match n {
        0 => Vec::new(),
        1 => vec![lo],
        _ => (0..n).map(|i| lo + (hi - lo) * i as f64 / (n - 1) as f64).collect(),
    }
}

/// Controller capacities 1.0, 1.1, ..., 12.0.
fn capacity_grid() -> Vec<f64> {
    (10..=120).map(|i| i as f64 / 10.0).collect()
}

const DEADLINES: [f64; 4] = [0.05, 0.1, 0.2, 0.5];
const FIG_BANDWIDTH_HZ: f64 = 10e6;
const FIG_TASK_GOPS: f64 = 10.0;
const FIG_DATA_BITS: f64 = 1e6;
const MAX_BBU_GOPS: f64 = 500.0;

fn overhead_floor(antennas: f64, bandwidth_hz: f64) -> f64 {
    antennas * (3.0 + antennas) * bandwidth_hz / (10.0 * DEFAULT_KAPPA_A)
}

fn bbu_grid(floor: f64) -> Vec<f64> {
    linspace(floor * 1.01, MAX_BBU_GOPS, 200)
}

fn fixed(pairs: &[(&str, f64)]) -> BTreeMap<String, f64> {
    pairs.iter().map(|&(k, v)| (k.to_string(), v)).collect()
}

/// Default spec for a figure panel. The grids span the regimes the figures
/// show; the exact plotted series values are not known.
pub fn figure_spec(figure: Figure) -> SweepSpec {
    let axis = |symbol: &str, grid: Vec<f64>| Axis { symbol: symbol.into(), grid };
    let series = |symbol: &str, values: Vec<f64>| Series { symbol: symbol.into(), values };
    let output = Some(PathBuf::from(format!("{}.csv", figure.name())));
    match figure {
        Figure::Fig2a => SweepSpec {
            model: SweepModel::SdnOutage,
            fixed: fixed(&[("lambda", 8.0), ("mu", 2.0), ("rho", 7.0), ("sigma2", 1.0)]),
            varied: axis("fs", capacity_grid()),
            series: series("p", vec![0.0, 0.25, 0.5, 0.75, 1.0]),
            output,
        },
        Figure::Fig2b => SweepSpec {
            model: SweepModel::SdnOutage,
            fixed: fixed(&[("lambda", 8.0), ("p", 0.5), ("rho", 7.0), ("sigma2", 1.0)]),
            varied: axis("fs", capacity_grid()),
            series: series("mu", vec![1.0, 2.0, 3.0, 4.0]),
            output,
        },
        Figure::Fig4a => {
            let antennas = vec![1.0, 2.0, 4.0, 8.0];
            let floor = overhead_floor(antennas[0], FIG_BANDWIDTH_HZ);
            SweepSpec {
                model: SweepModel::CranRate,
                fixed: fixed(&[("b", FIG_BANDWIDTH_HZ)]),
                varied: axis("fb", bbu_grid(floor)),
                series: series("a", antennas),
                output,
            }
        }
        Figure::Fig4b => {
            let bandwidths = vec![5e6, 10e6, 15e6, 20e6];
            let floor = overhead_floor(2.0, bandwidths[0]);
            SweepSpec {
                model: SweepModel::CranRate,
                fixed: fixed(&[("a", 2.0)]),
                varied: axis("fb", bbu_grid(floor)),
                series: series("b", bandwidths),
                output,
            }
        }
        Figure::Fig5a => SweepSpec {
            model: SweepModel::MccCloneVsRate,
            fixed: fixed(&[("f", FIG_TASK_GOPS), ("d", FIG_DATA_BITS)]),
            varied: axis("r", linspace(25e6, 250e6, 200)),
            series: series("tau", DEADLINES.to_vec()),
            output,
        },
        Figure::Fig5b => SweepSpec {
            model: SweepModel::MccCloneVsBbu,
            fixed: fixed(&[("f", FIG_TASK_GOPS), ("d", FIG_DATA_BITS), ("a", 2.0), ("b", FIG_BANDWIDTH_HZ)]),
            varied: axis("fb", bbu_grid(overhead_floor(2.0, FIG_BANDWIDTH_HZ))),
            series: series("tau", DEADLINES.to_vec()),
            output,
        },
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn row(series_value: f64, axis_value: f64, result: Outcome) -> SweepRow {
        SweepRow { series_value, axis_value, result }
    }

    #[test]
    fn csv_formatting() {
        assert_eq!(csv_string(&[]), "series,axis,value\n");
        assert_eq!(
            csv_string(&[row(0.5, 8.0, Outcome::Value(4.016e-11))]),
            "series,axis,value\n0.5,8,4.01600000000e-11\n"
        );
        assert_eq!(csv_string(&[row(0.5, 5.0, Outcome::Unstable)]), "series,axis,value\n0.5,5,UNSTABLE\n");
        assert_eq!(csv_string(&[row(2.0, 40.0, Outcome::Infeasible)]), "series,axis,value\n2,40,INFEASIBLE\n");
        assert_eq!(
            csv_string(&[row(0.5, 6.2, Outcome::Value(1.0))]),
            "series,axis,value\n0.5,6.2,1.00000000000\n"
        );
    }

    #[test]
    fn parses_documented_schema() {
        let spec = SweepSpec::from_json(
            r#"{"model":"SdnOutage","fixed":{"lambda":8,"mu":2,"rho":7,"sigma2":1},
                "varied":{"symbol":"fs","grid":[1,6.2,8]},"series":{"symbol":"p","values":[0.5]},
                "output":"out.csv"}"#,
        )
        .unwrap();
        let rows = run_sweep(&spec).unwrap();
        assert_eq!(rows.len(), 3);
        assert_eq!(rows[0].result, Outcome::Value(1.0));
        assert!((rows[1].result.value().unwrap() - 0.0227501319481792).abs() < 1e-12);
        assert_eq!(spec.output.as_deref(), Some(Path::new("out.csv")));
    }

    #[test]
    fn coverage_errors_name_the_symbol() {
        let base = figure_spec(Figure::Fig2a);
        let msg = |spec: SweepSpec| spec.validate().unwrap_err().to_string();

        let mut missing = base.clone();
        missing.fixed.remove("rho");
        assert!(msg(missing).contains("'rho'"));

        let mut duplicated = base.clone();
        duplicated.fixed.insert("fs".into(), 4.0);
        assert!(msg(duplicated).contains("'fs'"));

        let mut unknown = base.clone();
        unknown.fixed.insert("tau".into(), 1.0);
        assert!(msg(unknown).contains("'tau'"));

        let mut unsorted = base.clone();
        unsorted.varied.grid = vec![2.0, 1.0];
        assert!(msg(unsorted).contains("strictly increasing"));

        let mut repeated = base;
        repeated.series.values = vec![0.5, 0.5];
        assert!(msg(repeated).contains("distinct"));
    }

    #[test]
    fn rejects_unknown_fields_and_fractional_antennas() {
        assert!(SweepSpec::from_json(
            r#"{"model":"CranRate","fixed":{"b":1e7},"varied":{"symbol":"fb","grid":[100]},
                "series":{"symbol":"a","values":[2]},"colour":"red"}"#
        )
        .is_err());
        let spec = SweepSpec::from_json(
            r#"{"model":"CranRate","fixed":{"b":1e7},"varied":{"symbol":"fb","grid":[100]},
                "series":{"symbol":"a","values":[2.5]}}"#,
        )
        .unwrap();
        assert!(run_sweep(&spec).is_err());
    }

    #[test]
    fn sentinel_rows() {
        let rows = run_sweep(&figure_spec(Figure::Fig4a)).unwrap();
        let (a8_below, a8_above): (Vec<&SweepRow>, Vec<&SweepRow>) =
            rows.iter().filter(|r| r.series_value == 8.0).partition(|r| r.axis_value < 440.0);
        assert!(a8_below.iter().all(|r| r.result == Outcome::Infeasible));
        assert!(a8_above.iter().all(|r| r.result.value().is_some()));
    }

    #[test]
    fn figure_names_round_trip() {
        for f in Figure::ALL {
            assert_eq!(Figure::from_name(f.name()), Some(f));
            figure_spec(f).validate().unwrap();
            let json = figure_spec(f).to_json();
            assert_eq!(SweepSpec::from_json(&json).unwrap(), figure_spec(f));
        }
    }

    #[test]
    fn emit_writes_file() {
        let dir = tempfile::tempdir().unwrap();
        let spec = figure_spec(Figure::Fig2b);
        let rows = run_sweep(&spec).unwrap();
        let path = emit_csv(&rows, &spec, Some(&dir.path().join("f.csv"))).unwrap();
        let text = std::fs::read_to_string(path).unwrap();
        assert_eq!(text.lines().count(), 1 + 4 * 111);
        assert!(text.ends_with('\n') && !text.contains('\r'));
        assert!(emit_csv(&rows, &spec, Some(&dir.path().join("missing/f.csv"))).is_err());
    }
}
