mod args;

use std::fmt::Display;
use std::fs;
use std::io::{self, BufWriter, Write};
use std::process::ExitCode;

use clap::Parser;
use dfisher::families::FamilySpec;
use dfisher::fisher::{fisher_by, fisher_expansion, rakhmanov_density, Method};
use dfisher::numerics::{Backend, Scalar};
use dfisher::sweep::{self, Grid, SweepSpec};
use dfisher::verify::{run_suites, Suite};

use args::{BackendArg, Cli, Command, FisherArgs, PointArgs, SweepArgs, VerifyArgs};

const USAGE: u8 = 64;
const IO_ERROR: u8 = 74;

#[derive(Debug)]
enum Failure {
    Usage(String),
    Domain(String),
    Verification,
    Io(io::Error),
}

impl From<dfisher::Error> for Failure {
    fn from(e: dfisher::Error) -> Self {
        Failure::Domain(e.to_string())
    }
}

impl From<io::Error> for Failure {
    fn from(e: io::Error) -> Self {
        Failure::Io(e)
    }
}

type Outcome = Result<(), Failure>;

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() {
                ExitCode::from(USAGE)
            } else {
                ExitCode::SUCCESS
            };
        }
    };
    let outcome = match cli.command {
        Command::Fisher(a) => fisher(a),
        Command::Sweep(a) => run_sweep(a),
        Command::Verify(a) => verify(a),
        Command::Eval(a) => eval(a),
        Command::Density(a) => density(a),
    };
    match outcome {
        Ok(()) => ExitCode::SUCCESS,
        // Output closed early (e.g. piped into `head`).
        Err(Failure::Io(e)) if e.kind() == io::ErrorKind::BrokenPipe => ExitCode::SUCCESS,
        Err(Failure::Io(e)) => {
            eprintln!("dfisher: {e}");
            ExitCode::from(IO_ERROR)
        }
        Err(Failure::Usage(msg)) => {
            eprintln!("dfisher: {msg}");
            ExitCode::from(USAGE)
        }
        Err(Failure::Domain(msg)) => {
            eprintln!("dfisher: {msg}");
            ExitCode::from(2)
        }
        Err(Failure::Verification) => ExitCode::from(1),
    }
}

fn csv_line(out: &mut impl Write, fields: &[&dyn Display]) -> io::Result<()> {
    let line: Vec<String> = fields.iter().map(|f| f.to_string()).collect();
    writeln!(out, "{}", line.join(","))
}

/// Relative difference in short scientific notation; `0` when exact.
fn discrepancy(d: &Scalar) -> String {
    if d.is_zero() {
        "0".to_string()
    } else {
        format!("{:.3e}", d.to_f64())
    }
}

fn fisher(a: FisherArgs) -> Outcome {
    let backend = a.numeric.backend(BackendArg::Exact);
    let policy = a.numeric.policy();
    let given = a.family.spec(Backend::Exact)?;
    given.check_degree(a.n)?;
    let label = given.params_label();
    let family = given.with_backend(backend);
    let methods = if a.methods.is_empty() {
        Method::ALL.to_vec()
    } else {
        a.methods
    };
    // Discrepancies are measured against the connection expansion.
    let reference = fisher_expansion(&family, a.n).ok();
    let stdout = io::stdout();
    let mut out = stdout.lock();
    csv_line(
        &mut out,
        &[&"family", &"n", &"params", &"method", &"value", &"converged", &"discrepancy"],
    )?;
    let mut failures = 0;
    for &m in &methods {
        match fisher_by(&family, a.n, m, &policy) {
            Ok(v) => {
                let d = reference
                    .as_ref()
                    .map(|r| discrepancy(&v.value.rel_diff(r)))
                    .unwrap_or_default();
                csv_line(
                    &mut out,
                    &[&family.tag(), &a.n, &label, &m, &v.value, &v.converged, &d],
                )?;
            }
            Err(e) => {
                failures += 1;
                eprintln!("dfisher: {m}: {e}");
                csv_line(&mut out, &[&family.tag(), &a.n, &label, &m, &"error", &false, &""])?;
            }
        }
    }
    out.flush()?;
    if failures == methods.len() {
        return Err(Failure::Domain("no method could evaluate this point".into()));
    }
    Ok(())
}

fn run_sweep(a: SweepArgs) -> Outcome {
    if a.print_config {
        print!("{}", sweep::BUILTIN_FIGURES);
        return Ok(());
    }
    let backend = a.numeric.backend(BackendArg::Float);
    let policy = a.numeric.policy();
    let mut specs = match a.adhoc.family {
        Some(tag) => {
            let h = &a.adhoc;
            let (Some(vary), Some(start), Some(stop), Some(count)) =
                (&h.vary, &h.start, &h.stop, h.count)
            else {
                return Err(Failure::Usage(
                    "an ad hoc sweep needs --vary, --start, --stop and --count".into(),
                ));
            };
            vec![SweepSpec {
                figure: "adhoc".into(),
                curve: format!("{tag} vs {vary}"),
                family: tag,
                variable: vary.clone(),
                fixed: h.fixed(),
                degree: h.n,
                grid: Grid::linear(start.clone(), stop.clone(), count),
                methods: vec![Method::Expansion],
                backend,
                policy,
            }]
        }
        None => {
            let figures = match &a.config {
                Some(path) => {
                    let text = fs::read_to_string(path).map_err(|e| {
                        Failure::Usage(format!("cannot read {}: {e}", path.display()))
                    })?;
                    sweep::parse_figures(&text, backend, &policy)?
                }
                None => sweep::builtin_figures(backend, &policy)?,
            };
            for id in &a.figure {
                if !figures.iter().any(|f| &f.id == id) {
                    let known: Vec<&str> = figures.iter().map(|f| f.id.as_str()).collect();
                    return Err(Failure::Usage(format!(
                        "unknown figure {id:?}; available: {}",
                        known.join(", ")
                    )));
                }
            }
            figures
                .into_iter()
                .filter(|f| a.figure.is_empty() || a.figure.contains(&f.id))
                .flat_map(|f| f.curves)
                .collect()
        }
    };
    if !a.methods.is_empty() {
        for s in &mut specs {
            s.methods = a.methods.clone();
        }
    }
    let rows = sweep::run_sweep(&specs)?;
    match &a.out {
        Some(path) => {
            let file = fs::File::create(path)?;
            sweep::write_csv(&rows, BufWriter::new(file))?;
        }
        None => sweep::write_csv(&rows, io::stdout().lock())?,
    }
    Ok(())
}

fn verify(a: VerifyArgs) -> Outcome {
    let stdout = io::stdout();
    let mut out = stdout.lock();
    if a.list {
        for s in Suite::ALL {
            writeln!(out, "{s}")?;
        }
        return Ok(());
    }
    let suites = if a.suites.is_empty() {
        Suite::ALL.to_vec()
    } else {
        a.suites
    };
    let reports = run_suites(&suites);
    let width = suites.iter().map(|s| s.name().len()).max().unwrap_or(0);
    for r in &reports {
        let status = if r.ok() { "ok" } else { "FAILED" };
        writeln!(
            out,
            "{:<width$}  {:>6} passed  {:>4} failed  {status}",
            r.suite.name(),
            r.passed,
            r.failed
        )?;
        if let Some(first) = &r.first_failure {
            writeln!(out, "    first failure: {first}")?;
        }
        for note in &r.notes {
            writeln!(out, "    {note}")?;
        }
    }
    let failed = reports.iter().filter(|r| !r.ok()).count();
    writeln!(out, "{} of {} suites passed", reports.len() - failed, reports.len())?;
    out.flush()?;
    if failed > 0 {
        return Err(Failure::Verification);
    }
    Ok(())
}

fn lattice_range(family: &FamilySpec, a: &PointArgs) -> Result<std::ops::RangeInclusive<i64>, Failure> {
    let support = family.support();
    let from = a.from.unwrap_or(support.start);
    let to = a.to.unwrap_or_else(|| support.end.map_or(from + 30, |b| b - 1));
    if to < from {
        return Err(Failure::Usage(format!("empty range {from}..={to}")));
    }
    Ok(from..=to)
}

fn eval(a: PointArgs) -> Outcome {
    let family = a.family.spec(a.numeric.backend(BackendArg::Exact))?;
    family.check_degree(a.n)?;
    let range = lattice_range(&family, &a)?;
    let stdout = io::stdout();
    let mut out = stdout.lock();
    csv_line(
        &mut out,
        &[&"family", &"params", &"n", &"x", &"value", &"forward_diff"],
    )?;
    let label = family.params_label();
    for x in range {
        let xs = Scalar::from(x);
        let value = family.eval_poly(a.n, &xs)?;
        let diff = family.forward_diff(a.n, &xs)?;
        csv_line(&mut out, &[&family.tag(), &label, &a.n, &x, &value, &diff])?;
    }
    Ok(out.flush()?)
}

fn density(a: PointArgs) -> Outcome {
    let family = a.family.spec(a.numeric.backend(BackendArg::Exact))?;
    family.check_degree(a.n)?;
    let range = lattice_range(&family, &a)?;
    let stdout = io::stdout();
    let mut out = stdout.lock();
    csv_line(&mut out, &[&"family", &"params", &"n", &"x", &"density"])?;
    let label = family.params_label();
    for x in range {
        let rho = rakhmanov_density(&family, a.n, x)?;
        csv_line(&mut out, &[&family.tag(), &label, &a.n, &x, &rho])?;
    }
    Ok(out.flush()?)
}
