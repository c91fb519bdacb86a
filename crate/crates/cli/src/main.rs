mod render;

use std::io::{self, Write};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use serde::Serialize;

use intertwinor_core::closedform::ClosedFormError;
use intertwinor_core::exact::ExactScalar;
use intertwinor_core::ktype_graph::build_graph;
use intertwinor_core::operators::{
    verify_intertwinor, OperatorError, OperatorParams, OperatorRegistry, VerificationReport,
};
use intertwinor_core::spectrum::{MethodRegistry, SpectralValue, SpectrumError, SpectrumRow};
use intertwinor_core::suite::{run_suite, FaultInjection, SuiteConfig, SuiteReport};
use intertwinor_core::weights::{branches, make_ktype_weight, KTypeId, Weight};

#[derive(Parser)]
#[command(
    name = "intertwinor",
    version,
    about = "Exact spectra of odd-order conformally invariant operators on spinor-form bundles"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Table,
    Json,
    Csv,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Method {
    Recursion,
    Closedform,
    Numeric,
    Both,
}

impl Method {
    fn registry_name(self) -> &'static str {
        match self {
            Method::Recursion | Method::Both => "recursion",
            Method::Closedform => "closedform",
            Method::Numeric => "numeric",
        }
    }
}

#[derive(Subcommand)]
enum Command {
    /// Decide whether a Spin(n+1) weight contains a Spin(n) weight.
    Branch {
        #[arg(long)]
        n: u32,
        /// Comma-separated "p/q" entries.
        #[arg(long, allow_hyphen_values = true)]
        alpha: String,
        #[arg(long, allow_hyphen_values = true)]
        lambda: String,
    },
    /// Eigenvalues of the order-2r intertwinor on every K-type with j ≤ jmax.
    Spectrum {
        #[arg(long)]
        n: u32,
        #[arg(long, default_value_t = 0)]
        k: u32,
        #[arg(long, allow_hyphen_values = true)]
        r: ExactScalar,
        #[arg(long, default_value_t = 10)]
        jmax: u32,
        #[arg(long, value_enum, default_value_t = Method::Recursion)]
        method: Method,
        #[arg(long, value_enum, default_value_t = Format::Table)]
        format: Format,
    },
    /// Check that the order-(2l+1) operator is a constant multiple of the spectrum.
    Verify {
        #[arg(long)]
        n: u32,
        #[arg(long, default_value_t = 0)]
        k: u32,
        #[arg(long)]
        l: u32,
        #[arg(long, default_value_t = 20)]
        jmax: u32,
        #[arg(long, value_enum, default_value_t = Format::Table)]
        format: Format,
    },
    /// Run every check over all odd n ≤ nmax, all k, all l ≤ lmax.
    Suite {
        #[arg(long, default_value_t = 11)]
        nmax: u32,
        #[arg(long, default_value_t = 5)]
        lmax: u32,
        #[arg(long, default_value_t = 40)]
        jmax: u32,
        /// Add 1 to the datum of this edge index in every graph.
        #[arg(long)]
        inject_fault_edge: Option<usize>,
        #[arg(long, value_enum, default_value_t = Format::Table)]
        format: Format,
    },
    /// Print the K-type graph as JSON.
    Graph {
        #[arg(long)]
        n: u32,
        #[arg(long, default_value_t = 0)]
        k: u32,
        #[arg(long, default_value_t = 2)]
        jmax: u32,
    },
    /// List K-types with their highest weights.
    Ktypes {
        #[arg(long)]
        n: u32,
        #[arg(long, default_value_t = 0)]
        k: u32,
        #[arg(long, default_value_t = 2)]
        jmax: u32,
        #[arg(long, value_enum, default_value_t = Format::Table)]
        format: Format,
    },
    /// Eigenvalues of a named operator model.
    Eig {
        /// One of: dirac, d_odd, p_k, a_k0, tt_star, t_star_t, gstar_g, a_kl, product.
        #[arg(long)]
        op: String,
        #[arg(long)]
        n: u32,
        #[arg(long, default_value_t = 0)]
        k: u32,
        #[arg(long, default_value_t = 0)]
        l: u32,
        #[arg(long, default_value_t = 5)]
        jmax: u32,
        #[arg(long, value_enum, default_value_t = Format::Table)]
        format: Format,
    },
}

/// Why a command could not produce its result.
enum Failure {
    Invalid(String),
    Singular(String),
}

impl Failure {
    fn code(&self) -> u8 {
        match self {
            Failure::Invalid(_) => 2,
            Failure::Singular(_) => 3,
        }
    }
}

impl From<io::Error> for Failure {
    fn from(e: io::Error) -> Self {
        Failure::Invalid(format!("output: {e}"))
    }
}

impl From<SpectrumError> for Failure {
    fn from(e: SpectrumError) -> Self {
        if e.is_singular() {
            Failure::Singular(e.to_string())
        } else {
            Failure::Invalid(e.to_string())
        }
    }
}

impl From<OperatorError> for Failure {
    fn from(e: OperatorError) -> Self {
        match e {
            OperatorError::ClosedForm(ClosedFormError::GammaPole { .. })
            | OperatorError::ZeroDenominator(_) => Failure::Singular(e.to_string()),
            other => Failure::Invalid(other.to_string()),
        }
    }
}

fn invalid(e: impl ToString) -> Failure {
    Failure::Invalid(e.to_string())
}

/// Outcome of a command that ran to completion.
#[derive(PartialEq, Eq)]
enum Outcome {
    Pass,
    Fail,
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    let stdout = io::stdout();
    let mut out = stdout.lock();
    let result = run(cli.command, &mut out);
    let _ = out.flush();
    match result {
        Ok(Outcome::Pass) => ExitCode::SUCCESS,
        Ok(Outcome::Fail) => ExitCode::from(1),
        Err(f) => {
            let (Failure::Invalid(msg) | Failure::Singular(msg)) = &f;
            eprintln!("error: {msg}");
            ExitCode::from(f.code())
        }
    }
}

fn run<W: Write>(command: Command, out: &mut W) -> Result<Outcome, Failure> {
    match command {
        Command::Branch { n, alpha, lambda } => cmd_branch(out, n, &alpha, &lambda),
        Command::Spectrum {
            n,
            k,
            r,
            jmax,
            method,
            format,
        } => cmd_spectrum(out, n, k, &r, jmax, method, format),
        Command::Verify {
            n,
            k,
            l,
            jmax,
            format,
        } => cmd_verify(out, n, k, l, jmax, format),
        Command::Suite {
            nmax,
            lmax,
            jmax,
            inject_fault_edge,
            format,
        } => {
            let fault = inject_fault_edge.map(|edge| FaultInjection { edge });
            cmd_suite(
                out,
                &SuiteConfig {
                    nmax,
                    lmax,
                    jmax,
                    fault,
                },
                format,
            )
        }
        Command::Graph { n, k, jmax } => {
            let graph = build_graph(n, k, jmax).map_err(invalid)?;
            render::json(out, &graph)?;
            Ok(Outcome::Pass)
        }
        Command::Ktypes { n, k, jmax, format } => cmd_ktypes(out, n, k, jmax, format),
        Command::Eig {
            op,
            n,
            k,
            l,
            jmax,
            format,
        } => cmd_eig(out, &op, OperatorParams { n, k, l }, jmax, format),
    }
}

fn cmd_branch<W: Write>(
    out: &mut W,
    n: u32,
    alpha: &str,
    lambda: &str,
) -> Result<Outcome, Failure> {
    let alpha: Weight = alpha.parse().map_err(invalid)?;
    let lambda: Weight = lambda.parse().map_err(invalid)?;
    let contained = branches(&alpha, &lambda, n).map_err(invalid)?;
    writeln!(out, "{contained}")?;
    Ok(Outcome::Pass)
}

fn q_cell(q: Option<u8>) -> String {
    q.map(|q| q.to_string()).unwrap_or_default()
}

#[derive(Serialize)]
struct SpectrumJsonRow<'a> {
    j: u32,
    q: Option<u8>,
    eps: i64,
    value: &'a SpectralValue,
    #[serde(skip_serializing_if = "Option::is_none")]
    value_closedform: Option<&'a SpectralValue>,
    #[serde(rename = "match", skip_serializing_if = "Option::is_none")]
    matches: Option<bool>,
}

#[derive(Serialize)]
struct SpectrumJson<'a> {
    n: u32,
    k: u32,
    r: &'a ExactScalar,
    jmax: u32,
    method: &'static str,
    rows: Vec<SpectrumJsonRow<'a>>,
}

fn cmd_spectrum<W: Write>(
    out: &mut W,
    n: u32,
    k: u32,
    r: &ExactScalar,
    jmax: u32,
    method: Method,
    format: Format,
) -> Result<Outcome, Failure> {
    let registry = MethodRegistry::builtin();
    let primary = registry
        .get(method.registry_name())?
        .spectrum(n, k, r, jmax)?;
    let closed: Option<Vec<SpectrumRow>> = match method {
        Method::Both => Some(registry.get("closedform")?.spectrum(n, k, r, jmax)?),
        _ => None,
    };
    let matches: Option<Vec<bool>> = closed.as_ref().map(|c| {
        primary
            .iter()
            .zip(c)
            .map(|(a, b)| a.node == b.node && a.mu == b.mu)
            .collect()
    });

    let method_name = if method == Method::Both {
        "both"
    } else {
        method.registry_name()
    };
    let rows: Vec<SpectrumJsonRow> = primary
        .iter()
        .enumerate()
        .map(|(i, row)| SpectrumJsonRow {
            j: row.node.j,
            q: row.node.q,
            eps: row.node.eps.value(),
            value: &row.mu,
            value_closedform: closed.as_ref().map(|c| &c[i].mu),
            matches: matches.as_ref().map(|m| m[i]),
        })
        .collect();

    match format {
        Format::Json => render::json(
            out,
            &SpectrumJson {
                n,
                k,
                r,
                jmax,
                method: method_name,
                rows,
            },
        )?,
        Format::Table | Format::Csv => {
            let mut header = vec!["n", "k", "j", "q", "eps", "value"];
            if closed.is_some() {
                header.extend(["value_closedform", "match"]);
            }
            let cells: Vec<Vec<String>> = rows
                .iter()
                .map(|row| {
                    let mut cells = vec![
                        n.to_string(),
                        k.to_string(),
                        row.j.to_string(),
                        q_cell(row.q),
                        row.eps.to_string(),
                        row.value.to_string(),
                    ];
                    if let (Some(c), Some(m)) = (row.value_closedform, row.matches) {
                        cells.push(c.to_string());
                        cells.push(m.to_string());
                    }
                    cells
                })
                .collect();
            if format == Format::Csv {
                render::csv(&mut *out, &header, &cells)?;
            } else {
                render::table(out, &header, &cells)?;
            }
        }
    }
    let all_match = matches.is_none_or(|m| m.iter().all(|&b| b));
    Ok(if all_match {
        Outcome::Pass
    } else {
        Outcome::Fail
    })
}

#[derive(Serialize)]
struct VerifyJson<'a> {
    passed: bool,
    #[serde(flatten)]
    report: &'a VerificationReport,
}

fn opt_cell(v: Option<&ExactScalar>) -> String {
    v.map(ToString::to_string).unwrap_or_else(|| "-".into())
}

fn cmd_verify<W: Write>(
    out: &mut W,
    n: u32,
    k: u32,
    l: u32,
    jmax: u32,
    format: Format,
) -> Result<Outcome, Failure> {
    let report = verify_intertwinor(n, k, l, jmax)?;
    let passed = report.passed();
    match format {
        Format::Json => render::json(
            out,
            &VerifyJson {
                passed,
                report: &report,
            },
        )?,
        Format::Table | Format::Csv => {
            let header = [
                "n",
                "k",
                "l",
                "jmax",
                "operator",
                "grid_size",
                "constant",
                "failures",
                "passed",
            ];
            let summary = vec![vec![
                n.to_string(),
                k.to_string(),
                l.to_string(),
                jmax.to_string(),
                report.operator.to_string(),
                report.grid_size.to_string(),
                opt_cell(report.constant.as_ref()),
                report.failures.len().to_string(),
                passed.to_string(),
            ]];
            if format == Format::Csv {
                render::csv(&mut *out, &header, &summary)?;
            } else {
                render::table(out, &header, &summary)?;
                if !report.failures.is_empty() {
                    writeln!(out)?;
                    let rows: Vec<Vec<String>> = report
                        .failures
                        .iter()
                        .map(|f| {
                            vec![
                                f.node.to_string(),
                                f.eigenvalue.to_string(),
                                f.spectral.to_string(),
                                opt_cell(f.ratio.as_ref()),
                            ]
                        })
                        .collect();
                    render::table(out, &["node", "eigenvalue", "spectral", "ratio"], &rows)?;
                }
            }
        }
    }
    Ok(if passed { Outcome::Pass } else { Outcome::Fail })
}

#[derive(Serialize)]
struct SuiteJson<'a> {
    passed: bool,
    #[serde(flatten)]
    report: &'a SuiteReport,
}

fn cmd_suite<W: Write>(
    out: &mut W,
    config: &SuiteConfig,
    format: Format,
) -> Result<Outcome, Failure> {
    if config.nmax < 3 {
        return Err(invalid("nmax must be at least 3"));
    }
    let report = run_suite(config);
    let passed = report.passed();
    let header = ["n", "k", "l", "check", "passed", "detail"];
    let cells =
        |rows: &mut dyn Iterator<Item = &intertwinor_core::suite::SuiteRow>| -> Vec<Vec<String>> {
            rows.map(|r| {
                vec![
                    r.n.to_string(),
                    r.k.to_string(),
                    r.l.map(|l| l.to_string()).unwrap_or_default(),
                    r.check.to_string(),
                    r.passed.to_string(),
                    r.detail.clone(),
                ]
            })
            .collect()
        };
    match format {
        Format::Json => render::json(
            out,
            &SuiteJson {
                passed,
                report: &report,
            },
        )?,
        Format::Csv => render::csv(&mut *out, &header, &cells(&mut report.rows.iter()))?,
        Format::Table => {
            let failed = report.failures().count();
            if failed > 0 {
                render::table(out, &header, &cells(&mut report.failures()))?;
                writeln!(out)?;
            }
            writeln!(
                out,
                "{} checks over odd n <= {}, l <= {}, j <= {}: {} failed",
                report.rows.len(),
                config.nmax,
                config.lmax,
                config.jmax,
                failed
            )?;
        }
    }
    Ok(if passed { Outcome::Pass } else { Outcome::Fail })
}

#[derive(Serialize)]
struct KTypeJsonRow {
    node: KTypeId,
    weight: Weight,
}

fn cmd_ktypes<W: Write>(
    out: &mut W,
    n: u32,
    k: u32,
    jmax: u32,
    format: Format,
) -> Result<Outcome, Failure> {
    let graph = build_graph(n, k, jmax).map_err(invalid)?;
    let rows: Vec<KTypeJsonRow> = graph
        .nodes()
        .iter()
        .map(|id| {
            Ok(KTypeJsonRow {
                node: *id,
                weight: make_ktype_weight(id).map_err(invalid)?,
            })
        })
        .collect::<Result<_, Failure>>()?;
    let header = ["label", "j", "q", "eps", "weight"];
    let cells: Vec<Vec<String>> = rows
        .iter()
        .map(|r| {
            vec![
                r.node.to_string(),
                r.node.j.to_string(),
                q_cell(r.node.q),
                r.node.eps.to_string(),
                r.weight.to_string(),
            ]
        })
        .collect();
    match format {
        Format::Json => render::json(out, &rows)?,
        Format::Csv => render::csv(&mut *out, &header, &cells)?,
        Format::Table => render::table(out, &header, &cells)?,
    }
    Ok(Outcome::Pass)
}

#[derive(Serialize)]
struct EigJsonRow {
    node: KTypeId,
    eigenvalue: ExactScalar,
}

fn cmd_eig<W: Write>(
    out: &mut W,
    op: &str,
    params: OperatorParams,
    jmax: u32,
    format: Format,
) -> Result<Outcome, Failure> {
    let registry = OperatorRegistry::builtin();
    let model = registry.create(op, params).map_err(|e| match e {
        OperatorError::UnknownOperator(_) => {
            let names: Vec<&str> = registry.names().collect();
            Failure::Invalid(format!("{e}; known operators: {}", names.join(", ")))
        }
        other => Failure::from(other),
    })?;
    let spectrum = model.spectrum(jmax)?;
    let header = ["j", "q", "eps", "eigenvalue"];
    let cells: Vec<Vec<String>> = spectrum
        .iter()
        .map(|(id, v)| {
            vec![
                id.j.to_string(),
                q_cell(id.q),
                id.eps.to_string(),
                v.to_string(),
            ]
        })
        .collect();
    match format {
        Format::Json => {
            let rows: Vec<EigJsonRow> = spectrum
                .into_iter()
                .map(|(node, eigenvalue)| EigJsonRow { node, eigenvalue })
                .collect();
            render::json(out, &rows)?
        }
        Format::Csv => render::csv(&mut *out, &header, &cells)?,
        Format::Table => render::table(out, &header, &cells)?,
    }
    Ok(Outcome::Pass)
}
