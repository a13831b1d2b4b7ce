//! Parameter sweeps that tabulate the relative Fisher information along a
//! grid, one CSV row per grid point and method.
//!
//! Sweeps are described in TOML (see `figures.toml`, embedded as
//! [`BUILTIN_FIGURES`]). Rows come out grid-major, method-minor, in curve
//! order, independent of how the points are scheduled across threads.

use std::collections::BTreeMap;
use std::io::Write;

use rayon::prelude::*;
use rug::{Integer, Rational};
use serde::Deserialize;

use crate::error::{Error, Result};
use crate::families::{FamilySpec, FamilyTag};
use crate::fisher::{fisher_by, Method, TruncationPolicy};
use crate::numerics::{Backend, Scalar};

pub const BUILTIN_FIGURES: &str = include_str!("../figures.toml");

pub const CSV_HEADER: [&str; 11] = [
    "figure", "curve", "family", "n", "params", "variable", "point", "method", "value",
    "converged", "note",
];

/// Inclusive linear segment `start, ..., stop` with `count` points.
#[derive(Clone, Debug, PartialEq)]
pub struct Segment {
    pub start: Scalar,
    pub stop: Scalar,
    pub count: u32,
}

#[derive(Clone, Debug, PartialEq, Default)]
pub struct Grid {
    pub segments: Vec<Segment>,
}

impl Grid {
    pub fn linear(start: Scalar, stop: Scalar, count: u32) -> Self {
        Grid {
            segments: vec![Segment { start, stop, count }],
        }
    }

    pub fn points(&self) -> Vec<Scalar> {
        let mut out = Vec::new();
        for seg in &self.segments {
            match seg.count {
                0 => {}
                1 => out.push(seg.start.clone()),
                c => {
                    let step = (&seg.stop - &seg.start) / i64::from(c - 1);
                    out.extend((0..c).map(|i| &seg.start + &(&step * i64::from(i))));
                }
            }
        }
        out
    }
}

/// One curve: a family with all but one variable fixed.
#[derive(Clone, Debug, PartialEq)]
pub struct SweepSpec {
    pub figure: String,
    pub curve: String,
    pub family: FamilyTag,
    /// `"n"` or a parameter name of `family`.
    pub variable: String,
    pub fixed: Vec<(String, Scalar)>,
    /// Degree, when the variable is a parameter.
    pub degree: Option<u32>,
    pub grid: Grid,
    pub methods: Vec<Method>,
    pub backend: Backend,
    pub policy: TruncationPolicy,
}

impl SweepSpec {
    pub fn validate(&self) -> Result<()> {
        let names = self.family.parameter_names();
        let sweeps_degree = self.variable == "n";
        if !sweeps_degree && !names.contains(&self.variable.as_str()) {
            return Err(Error::Domain(format!(
                "{}: cannot sweep {} for the {} family",
                self.curve, self.variable, self.family
            )));
        }
        if sweeps_degree == self.degree.is_some() {
            return Err(Error::Domain(format!(
                "{}: give a fixed degree exactly when sweeping a parameter",
                self.curve
            )));
        }
        for (name, _) in &self.fixed {
            if !names.contains(&name.as_str()) || *name == self.variable {
                return Err(Error::Domain(format!(
                    "{}: unexpected fixed parameter {name}",
                    self.curve
                )));
            }
        }
        if self.variable == "n" || self.variable == "N" {
            if let Some(bad) = self
                .grid
                .points()
                .into_iter()
                .find(|p| !p.is_integer() || p.is_negative())
            {
                return Err(Error::Domain(format!(
                    "{}: the {} grid must be nonnegative integers, found {bad}",
                    self.curve, self.variable
                )));
            }
        }
        if self.methods.is_empty() {
            return Err(Error::Domain(format!("{}: no methods", self.curve)));
        }
        Ok(())
    }

    /// The family at one grid point, its degree, and the label of its
    /// parameters as given (before conversion to the sweep backend).
    fn family_at(&self, point: &Scalar) -> Result<(FamilySpec, u32, String)> {
        let mut named: Vec<(&str, Scalar)> = self
            .fixed
            .iter()
            .map(|(k, v)| (k.as_str(), v.clone()))
            .collect();
        let degree = match self.degree {
            Some(n) => {
                named.push((self.variable.as_str(), point.clone()));
                n
            }
            None => point
                .to_i64()
                .and_then(|n| u32::try_from(n).ok())
                .ok_or_else(|| Error::Domain(format!("degree {point} is not admissible")))?,
        };
        let given = FamilySpec::from_named(self.family, &named)?;
        given.check_degree(degree)?;
        Ok((given.with_backend(self.backend), degree, given.params_label()))
    }

    fn fallback_params(&self, point: &Scalar) -> String {
        let mut parts: Vec<String> = self
            .fixed
            .iter()
            .map(|(k, v)| format!("{k}={v}"))
            .collect();
        if self.degree.is_some() {
            parts.push(format!("{}={point}", self.variable));
        }
        parts.join(";")
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct SweepRow {
    pub figure: String,
    pub curve: String,
    pub family: FamilyTag,
    pub degree: Option<u32>,
    pub params: String,
    pub variable: String,
    pub point: Scalar,
    pub method: Method,
    /// The value, or the error message for this point.
    pub value: std::result::Result<Scalar, String>,
    pub converged: bool,
}

impl SweepRow {
    pub fn record(&self) -> [String; 11] {
        let (value, note) = match &self.value {
            Ok(v) => (v.to_string(), String::new()),
            Err(msg) => ("error".to_string(), msg.clone()),
        };
        [
            self.figure.clone(),
            self.curve.clone(),
            self.family.to_string(),
            self.degree.map(|n| n.to_string()).unwrap_or_default(),
            self.params.clone(),
            self.variable.clone(),
            decimal_or_ratio(&self.point),
            self.method.to_string(),
            value,
            self.converged.to_string(),
            note,
        ]
    }
}

/// Terminating decimals print as decimals (`0.05`), other values unchanged.
pub fn decimal_or_ratio(value: &Scalar) -> String {
    let Some(r) = value.as_rational() else {
        return value.to_string();
    };
    let mut den = Integer::from(r.denom());
    let mut digits = 0usize;
    for prime in [2u32, 5] {
        while den.is_divisible_u(prime) {
            den /= prime;
        }
    }
    if den != 1 {
        return value.to_string();
    }
    let mut scaled = Rational::from(r);
    while *scaled.denom() != 1 {
        scaled *= 10;
        digits += 1;
    }
    let numer = Integer::from(scaled.numer());
    if digits == 0 {
        return numer.to_string();
    }
    let negative = numer < 0;
    let text = Integer::from(numer.abs_ref()).to_string();
    let padded = format!("{text:0>width$}", width = digits + 1);
    let (int, frac) = padded.split_at(padded.len() - digits);
    format!("{}{int}.{frac}", if negative { "-" } else { "" })
}

fn run_point(spec: &SweepSpec, point: &Scalar) -> Vec<SweepRow> {
    let base = |params: String, degree: Option<u32>, method: Method| SweepRow {
        figure: spec.figure.clone(),
        curve: spec.curve.clone(),
        family: spec.family,
        degree,
        params,
        variable: spec.variable.clone(),
        point: point.clone(),
        method,
        value: Err(String::new()),
        converged: false,
    };
    match spec.family_at(point) {
        Err(e) => spec
            .methods
            .iter()
            .map(|&m| SweepRow {
                value: Err(e.to_string()),
                ..base(spec.fallback_params(point), spec.degree.or(point.to_i64().map(|n| n as u32)), m)
            })
            .collect(),
        Ok((family, degree, label)) => spec
            .methods
            .iter()
            .map(|&m| {
                let row = base(label.clone(), Some(degree), m);
                match fisher_by(&family, degree, m, &spec.policy) {
                    Ok(v) => SweepRow {
                        value: Ok(v.value),
                        converged: v.converged,
                        ..row
                    },
                    Err(e) => SweepRow {
                        value: Err(e.to_string()),
                        ..row
                    },
                }
            })
            .collect(),
    }
}

/// Evaluates every grid point of every spec, in parallel, preserving order.
pub fn run_sweep(specs: &[SweepSpec]) -> Result<Vec<SweepRow>> {
    for s in specs {
        s.validate()?;
    }
    let tasks: Vec<(&SweepSpec, Scalar)> = specs
        .iter()
        .flat_map(|s| s.grid.points().into_iter().map(move |p| (s, p)))
        .collect();
    let rows: Vec<Vec<SweepRow>> = tasks
        .par_iter()
        .map(|(spec, point)| run_point(spec, point))
        .collect();
    Ok(rows.into_iter().flatten().collect())
}

pub fn write_csv<W: Write>(rows: &[SweepRow], out: W) -> std::io::Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(CSV_HEADER)?;
    for row in rows {
        w.write_record(row.record())?;
    }
    w.flush()
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct FiguresFile {
    figure: Vec<FigureConfig>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct SegmentConfig {
    start: String,
    stop: String,
    count: u32,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct CurveConfig {
    label: String,
    n: Option<u32>,
    #[serde(default)]
    params: BTreeMap<String, String>,
    grid: Option<Vec<SegmentConfig>>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct FigureConfig {
    id: String,
    title: Option<String>,
    family: String,
    variable: String,
    #[serde(default)]
    grid: Vec<SegmentConfig>,
    #[serde(default)]
    methods: Vec<String>,
    curve: Vec<CurveConfig>,
}

/// A named group of curves.
#[derive(Clone, Debug, PartialEq)]
pub struct Figure {
    pub id: String,
    pub title: String,
    pub curves: Vec<SweepSpec>,
}

fn scalar(text: &str) -> Result<Scalar> {
    text.parse::<Scalar>()
        .map_err(|e| Error::Domain(e.to_string()))
}

fn grid(segments: &[SegmentConfig]) -> Result<Grid> {
    let segments = segments
        .iter()
        .map(|s| {
            Ok(Segment {
                start: scalar(&s.start)?,
                stop: scalar(&s.stop)?,
                count: s.count,
            })
        })
        .collect::<Result<_>>()?;
    Ok(Grid { segments })
}

/// Parses a figures file; every curve is evaluated under `backend` and
/// `policy`.
pub fn parse_figures(text: &str, backend: Backend, policy: &TruncationPolicy) -> Result<Vec<Figure>> {
    let file: FiguresFile =
        toml::from_str(text).map_err(|e| Error::Domain(format!("figures file: {e}")))?;
    file.figure
        .into_iter()
        .map(|fig| {
            let family: FamilyTag = fig.family.parse()?;
            let methods = if fig.methods.is_empty() {
                vec![Method::Expansion]
            } else {
                fig.methods
                    .iter()
                    .map(|m| m.parse())
                    .collect::<Result<Vec<Method>>>()?
            };
            let shared = grid(&fig.grid)?;
            let curves = fig
                .curve
                .into_iter()
                .map(|c| {
                    let fixed = c
                        .params
                        .iter()
                        .map(|(k, v)| Ok((k.clone(), scalar(v)?)))
                        .collect::<Result<Vec<_>>>()?;
                    let spec = SweepSpec {
                        figure: fig.id.clone(),
                        curve: c.label,
                        family,
                        variable: fig.variable.clone(),
                        fixed,
                        degree: c.n,
                        grid: match &c.grid {
                            Some(g) => grid(g)?,
                            None => shared.clone(),
                        },
                        methods: methods.clone(),
                        backend,
                        policy: policy.clone(),
                    };
                    spec.validate()?;
                    Ok(spec)
                })
                .collect::<Result<Vec<_>>>()?;
            Ok(Figure {
                title: fig.title.unwrap_or_else(|| fig.id.clone()),
                id: fig.id,
                curves,
            })
        })
        .collect()
}

pub fn builtin_figures(backend: Backend, policy: &TruncationPolicy) -> Result<Vec<Figure>> {
    parse_figures(BUILTIN_FIGURES, backend, policy)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(s: &str) -> Scalar {
        s.parse().unwrap()
    }

    #[test]
    fn grids_are_exact() {
        let g = Grid::linear(q("0.05"), q("0.95"), 91);
        let pts = g.points();
        assert_eq!(pts.len(), 91);
        assert_eq!(pts[1], q("0.06"));
        assert_eq!(pts[90], q("0.95"));
    }

    #[test]
    fn decimals() {
        assert_eq!(decimal_or_ratio(&q("0.05")), "0.05");
        assert_eq!(decimal_or_ratio(&q("-0.5")), "-0.5");
        assert_eq!(decimal_or_ratio(&q("40")), "40");
        assert_eq!(decimal_or_ratio(&q("1/3")), "1/3");
    }

    #[test]
    fn builtin_config_loads() {
        let figs = builtin_figures(Backend::Exact, &TruncationPolicy::default()).unwrap();
        assert_eq!(figs.len(), 10);
        assert_eq!(figs[8].curves.len(), 4);
        assert_eq!(figs[8].curves[0].grid.points().len(), 91);
    }

    #[test]
    fn domain_errors_become_rows() {
        let spec = SweepSpec {
            figure: "t".into(),
            curve: "c".into(),
            family: FamilyTag::Kravchuk,
            variable: "p".into(),
            fixed: vec![("N".into(), q("5"))],
            degree: Some(2),
            grid: Grid::linear(q("0.5"), q("1"), 2),
            methods: vec![Method::Expansion, Method::DirectSum],
            backend: Backend::Exact,
            policy: TruncationPolicy::default(),
        };
        let rows = run_sweep(&[spec]).unwrap();
        assert_eq!(rows.len(), 4);
        assert!(rows[0].value.is_ok());
        assert_eq!(rows[1].method, Method::DirectSum);
        assert!(rows[3].value.is_err());
        let mut buf = Vec::new();
        write_csv(&rows, &mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        assert!(text.starts_with("figure,curve,family,n,params,variable,point,method,value,converged,note\n"));
        assert_eq!(text.lines().count(), 5);
    }

    #[test]
    fn rejects_mismatched_variable() {
        let text = r#"
[[figure]]
id = "x"
family = "charlier"
variable = "gamma"
grid = [{ start = "1", stop = "2", count = 2 }]
[[figure.curve]]
label = "bad"
n = 1
"#;
        assert!(parse_figures(text, Backend::Exact, &TruncationPolicy::default()).is_err());
    }
}
