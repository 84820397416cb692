use std::io::{Read, Write};
use std::path::PathBuf;

use polyroots::bivariate::solve_system;
use polyroots::realroots::{multiplicity, nth_root};
use polyroots::{complex_roots, real_roots, Complex64, Error, Tolerances};
use serde_json::{json, Value};

use crate::parse::{parse_complex, parse_poly, ParsedPoly};

#[derive(Debug, Clone, PartialEq)]
pub enum Command {
    RealRoots,
    ComplexRoots,
    SolveSystem,
    NthRoot {
        a: f64,
        n: u32,
    },
    Bound,
    /// `at` is kept as text so a complex point can be parsed with the
    /// polynomial grammar.
    Multiplicity {
        at: String,
    },
}

impl Command {
    pub fn name(&self) -> &'static str {
        match self {
            Command::RealRoots => "real-roots",
            Command::ComplexRoots => "complex-roots",
            Command::SolveSystem => "solve-system",
            Command::NthRoot { .. } => "nth-root",
            Command::Bound => "bound",
            Command::Multiplicity { .. } => "multiplicity",
        }
    }

    fn arity(&self) -> usize {
        match self {
            Command::NthRoot { .. } => 0,
            Command::SolveSystem => 2,
            _ => 1,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum OutputFormat {
    #[default]
    Text,
    Json,
}

#[derive(Debug, Clone, PartialEq)]
pub enum InputSource {
    Inline(Vec<String>),
    File(PathBuf),
    Stdin,
}

#[derive(Debug, Clone, PartialEq)]
pub struct CliConfig {
    pub command: Command,
    pub tolerances: Tolerances,
    pub format: OutputFormat,
    pub input: InputSource,
}

enum Failure {
    Usage(String),
    Solver(Error),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Solver(e)
    }
}

#[derive(Default)]
struct Report {
    input: Value,
    roots: Vec<Value>,
    solutions: Option<Vec<Value>>,
    bound: Option<f64>,
    warnings: Vec<String>,
    lines: Vec<String>,
}

/// Runs one command and returns the process exit code: 0 on success, 2 when
/// the solution set is infinite or could not be completed, 1 otherwise.
pub fn run(config: &CliConfig, stdin: &mut dyn Read, out: &mut dyn Write, err: &mut dyn Write) -> i32 {
    let result = execute(config, stdin);
    match result {
        Ok(report) => {
            let written = match config.format {
                OutputFormat::Text => write_text(&report, out, err),
                OutputFormat::Json => write_json(config, &report, out),
            };
            match written {
                Ok(()) => 0,
                Err(e) => {
                    let _ = writeln!(err, "error: cannot write output: {e}");
                    1
                }
            }
        }
        Err(Failure::Usage(msg)) => {
            let _ = writeln!(err, "error: {msg}");
            1
        }
        Err(Failure::Solver(e)) => {
            let _ = writeln!(err, "error: {e}");
            match e {
                Error::InfiniteSolutions { .. } | Error::IncompleteRootSet { .. } => 2,
                _ => 1,
            }
        }
    }
}

fn execute(config: &CliConfig, stdin: &mut dyn Read) -> Result<Report, Failure> {
    let tol = &config.tolerances;
    tol.validate()?;
    let texts = read_inputs(config, stdin)?;
    let parsed = texts
        .iter()
        .map(|t| parse_poly(t).map_err(|e| Failure::Usage(format!("cannot parse `{t}`: {e}"))))
        .collect::<Result<Vec<_>, _>>()?;
    let mut report = Report {
        input: match texts.as_slice() {
            [one] => json!(one),
            many => json!(many),
        },
        ..Report::default()
    };

    match &config.command {
        Command::RealRoots => {
            let p = only(parsed)?.into_real().map_err(Failure::Usage)?;
            let roots = real_roots(&p, tol)?;
            if roots.is_empty() {
                report.warnings.push("no real roots".into());
            }
            for r in roots {
                if r.multiplicity > 1 {
                    report.warnings.push(format!(
                        "root {} has multiplicity {}, so its position is less accurate than a simple root's",
                        fmt_num(r.value),
                        r.multiplicity
                    ));
                }
                report.lines.push(with_multiplicity(fmt_num(r.value), r.multiplicity));
                report
                    .roots
                    .push(root_json(Complex64::new(r.value, 0.0), r.multiplicity, r.residual));
            }
        }
        Command::ComplexRoots => {
            let p = only(parsed)?.into_complex().map_err(Failure::Usage)?;
            for r in complex_roots(&p, tol)? {
                report
                    .lines
                    .push(with_multiplicity(fmt_complex(r.value), r.multiplicity));
                report.roots.push(root_json(r.value, r.multiplicity, r.residual));
            }
        }
        Command::SolveSystem => {
            let mut it = parsed.into_iter();
            let (Some(p1), Some(p2)) = (it.next(), it.next()) else {
                return Err(Failure::Usage("solve-system needs two polynomials".into()));
            };
            let p1 = p1.into_bivar().map_err(Failure::Usage)?;
            let p2 = p2.into_bivar().map_err(Failure::Usage)?;
            let set = solve_system(&p1, &p2, tol)?;
            if set.is_empty() {
                report.warnings.push("no real solutions".into());
            }
            let mut solutions = Vec::new();
            for s in &set.points {
                report.lines.push(format!("{} {}", fmt_num(s.x), fmt_num(s.y)));
                solutions
                    .push(json!({"x": s.x + 0.0, "y": s.y + 0.0, "residual1": s.residual1, "residual2": s.residual2}));
            }
            report.solutions = Some(solutions);
        }
        &Command::NthRoot { a, n } => {
            let r = nth_root(a, n, tol)?;
            report.input = json!({"a": a, "n": n});
            report.lines.push(fmt_num(r));
            report
                .roots
                .push(root_json(Complex64::new(r, 0.0), 1, (r.powi(n as i32) - a).abs()));
        }
        Command::Bound => {
            let p = only(parsed)?.into_real().map_err(Failure::Usage)?;
            let b = p.root_bound()?;
            report.lines.push(fmt_num(b));
            report.bound = Some(b);
        }
        Command::Multiplicity { at } => {
            let z = parse_complex(at).map_err(|e| Failure::Usage(format!("cannot parse point `{at}`: {e}")))?;
            let (m, residual) = match only(parsed)? {
                ParsedPoly::Real(p) if z.im == 0.0 => (multiplicity(&p, z.re, tol)?, p.eval(z.re).abs()),
                other => {
                    let p = other.into_complex().map_err(Failure::Usage)?;
                    (multiplicity(&p, z, tol)?, p.eval(z).norm())
                }
            };
            report.lines.push(m.to_string());
            report.roots.push(root_json(z, m, residual));
        }
    }
    Ok(report)
}

fn only(mut parsed: Vec<ParsedPoly>) -> Result<ParsedPoly, Failure> {
    parsed.pop().ok_or_else(|| Failure::Usage("missing polynomial".into()))
}

fn read_inputs(config: &CliConfig, stdin: &mut dyn Read) -> Result<Vec<String>, Failure> {
    let want = config.command.arity();
    let name = config.command.name();
    let texts = match &config.input {
        InputSource::Inline(v) => v.clone(),
        _ if want == 0 => Vec::new(),
        InputSource::File(path) => {
            let body = std::fs::read_to_string(path)
                .map_err(|e| Failure::Usage(format!("cannot read {}: {e}", path.display())))?;
            split_lines(&body, want)
        }
        InputSource::Stdin => {
            let mut body = String::new();
            stdin
                .read_to_string(&mut body)
                .map_err(|e| Failure::Usage(format!("cannot read stdin: {e}")))?;
            split_lines(&body, want)
        }
    };
    if texts.len() != want {
        let noun = if want == 1 { "polynomial" } else { "polynomials" };
        return Err(Failure::Usage(format!(
            "{name} takes {want} {noun}, got {}",
            texts.len()
        )));
    }
    Ok(texts)
}

/// Non-empty lines; a single expected input may span several lines.
fn split_lines(body: &str, want: usize) -> Vec<String> {
    let lines: Vec<String> = body
        .lines()
        .map(str::trim)
        .filter(|l| !l.is_empty())
        .map(String::from)
        .collect();
    if want == 1 && lines.len() > 1 {
        vec![lines.join(" ")]
    } else {
        lines
    }
}

// Adding 0.0 turns -0.0 into 0.0.
fn root_json(z: Complex64, m: usize, residual: f64) -> Value {
    json!({"re": z.re + 0.0, "im": z.im + 0.0, "multiplicity": m, "residual": residual})
}

fn write_text(report: &Report, out: &mut dyn Write, err: &mut dyn Write) -> std::io::Result<()> {
    for w in &report.warnings {
        writeln!(err, "warning: {w}")?;
    }
    for line in &report.lines {
        writeln!(out, "{line}")?;
    }
    out.flush()
}

fn write_json(config: &CliConfig, report: &Report, out: &mut dyn Write) -> std::io::Result<()> {
    let mut doc = json!({
        "command": config.command.name(),
        "input": report.input,
        "warnings": report.warnings,
    });
    match &report.solutions {
        Some(s) => doc["solutions"] = json!(s),
        None => doc["roots"] = json!(report.roots),
    }
    if let Some(b) = report.bound {
        doc["bound"] = json!(b);
    }
    serde_json::to_writer_pretty(&mut *out, &doc)?;
    writeln!(out)?;
    out.flush()
}

fn with_multiplicity(value: String, m: usize) -> String {
    if m > 1 {
        format!("{value} (multiplicity {m})")
    } else {
        value
    }
}

/// Twelve significant digits with trailing zeros dropped, so `1.0000000000000002`
/// prints as `1`. Magnitudes under 1e-12 print as `0`; JSON keeps full precision.
pub fn fmt_num(v: f64) -> String {
    if !v.is_finite() {
        return v.to_string();
    }
    if v.abs() < 1e-12 {
        return "0".into();
    }
    let magnitude = v.abs().log10().floor() as i32;
    let decimals = (11 - magnitude).clamp(0, 40) as usize;
    let s = format!("{v:.decimals$}");
    let s = if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.')
    } else {
        &s
    };
    if s == "-0" {
        "0".into()
    } else {
        s.to_string()
    }
}

fn fmt_complex(z: Complex64) -> String {
    let (re, im) = (fmt_num(z.re), fmt_num(z.im.abs()));
    match (re.as_str(), im.as_str()) {
        (_, "0") => re,
        ("0", _) if z.im < 0.0 => format!("-{im}i"),
        ("0", _) => format!("{im}i"),
        _ if z.im < 0.0 => format!("{re}-{im}i"),
        _ => format!("{re}+{im}i"),
    }
}
