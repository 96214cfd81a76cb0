//! Command-line front end: parses hypersurface files, dispatches the search,
//! count and audit commands, and renders reports as JSON or CSV.

pub mod input;

use std::path::PathBuf;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};
use transverse_core::audit::{self, AuditContext, AuditReport};
use transverse_core::search::{self, SearchOutcome};
use transverse_core::{Error, FieldDescriptor, Limits, Result};

pub use input::{parse_input, Input};

pub const DEFAULT_SEED: u64 = 20_240_601;

/// Exit status when a search exhausts although its threshold was met.
pub const EXIT_THEOREM_VIOLATION: i32 = 2;
/// Exit status for usage, input and computation errors.
pub const EXIT_ERROR: i32 = 1;
/// Exit status when an audit report fails its bound.
pub const EXIT_AUDIT_FAILED: i32 = 3;

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum CountKind {
    Lines,
    Hyperplanes,
    Superspaces,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum AuditKind {
    All,
    SpaceFilling,
    Inequalities,
    Separation,
}

#[derive(Debug, Parser)]
#[command(name = "transverse", version, about = "Transverse linear sections of hypersurfaces over finite fields")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    /// Hypersurface file: header `p=<p> m=<m> n=<n>`, then the form.
    #[arg(long, global = true)]
    pub input: Option<PathBuf>,
    /// Report path; standard output when absent.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    #[arg(long, global = true, value_enum, default_value = "json")]
    pub format: Format,
    #[arg(long, global = true, default_value_t = DEFAULT_SEED)]
    pub seed: u64,
    /// Worker threads; results do not depend on it.
    #[arg(long, global = true)]
    pub jobs: Option<usize>,
    #[arg(long, global = true, default_value_t = 40)]
    pub max_field_bits: u32,
    #[arg(long, global = true, default_value_t = 1 << 24)]
    pub max_enumeration: u64,
    /// Record wall-clock runtimes in audit reports (breaks byte-identical output).
    #[arg(long, global = true)]
    pub timings: bool,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Transverse line to a reduced hypersurface.
    FindLine,
    /// Very transverse flag up to an r-plane on a smooth hypersurface.
    FindFlag {
        #[arg(long)]
        r: usize,
    },
    /// r-plane with a proper, reduced section.
    FindReduced {
        #[arg(long)]
        r: usize,
    },
    /// Exhaustive counts against their bounds.
    Count {
        #[arg(value_enum)]
        what: CountKind,
        /// Target dimension for superspace counts.
        #[arg(long)]
        r: Option<usize>,
    },
    /// Fixture audits and arithmetic sweeps.
    Audit {
        #[arg(value_enum)]
        what: AuditKind,
        #[arg(long)]
        q: Option<u64>,
        #[arg(long)]
        d: Option<u32>,
        #[arg(long)]
        n: Option<usize>,
        #[arg(long)]
        r: Option<usize>,
        #[arg(long, default_value_t = 20)]
        samples: u64,
        #[arg(long, default_value_t = 6)]
        nmax: u32,
        #[arg(long, default_value_t = 5)]
        dmax: u32,
    },
}

/// Rendered report and the exit status it implies.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RunOutput {
    pub code: i32,
    pub text: String,
}

impl Cli {
    pub fn limits(&self) -> Limits {
        Limits { max_field_bits: self.max_field_bits, max_enumeration: self.max_enumeration, ..Limits::default() }
    }

    fn context(&self) -> AuditContext {
        AuditContext { seed: self.seed, limits: self.limits(), timings: self.timings }
    }

    fn read_input(&self) -> Result<Input> {
        let path = self.input.as_ref().ok_or_else(|| Error::InvalidParameter("--input is required".into()))?;
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::InvalidParameter(format!("cannot read {}: {e}", path.display())))?;
        parse_input(&text, &self.limits())
    }
}

/// `F_q` for a prime power `q`.
pub fn field_of_order(q: u64, limits: &Limits) -> Result<FieldDescriptor> {
    let p = (2..=q).find(|p| q % p == 0).ok_or_else(|| Error::InvalidParameter(format!("{q} is not a prime power")))?;
    let (mut m, mut v) = (0, q);
    while v % p == 0 {
        v /= p;
        m += 1;
    }
    if v != 1 {
        return Err(Error::InvalidParameter(format!("{q} is not a prime power")));
    }
    FieldDescriptor::with_limits(p, m, None, limits)
}

fn search_output(cli: &Cli, command: &str, input: &Input, outcome: &SearchOutcome) -> Result<RunOutput> {
    let code = if outcome.theorem_violation { EXIT_THEOREM_VIOLATION } else { 0 };
    let text = match cli.format {
        Format::Json => {
            let v = json!({
                "command": command,
                "field": {
                    "p": input.field.p(),
                    "m": input.field.degree(),
                    "modulus": input.field.modulus_string(),
                },
                "n": input.n,
                "form": input.form.to_string(),
                "outcome": outcome.to_json(),
            });
            serde_json::to_string_pretty(&v).unwrap() + "\n"
        }
        Format::Csv => {
            let found = match outcome.to_json()["found"].clone() {
                Value::Null => String::new(),
                v => v.get("subspace").or_else(|| v.get("point")).map(|s| s.to_string()).unwrap_or_else(|| v.to_string()),
            };
            let mut w = csv::Writer::from_writer(Vec::new());
            let g = outcome.gate;
            w.write_record(["search", "found", "tested", "theorem_violation", "gate_q", "gate_threshold", "gate_satisfied", "seed"])
                .and_then(|_| {
                    w.write_record([
                        outcome.search.to_string(),
                        found.trim_matches('"').to_string(),
                        outcome.tested.to_string(),
                        outcome.theorem_violation.to_string(),
                        g.q.to_string(),
                        g.threshold.to_string(),
                        g.satisfied().to_string(),
                        outcome.seed.to_string(),
                    ])
                })
                .map_err(|e| Error::InvalidParameter(e.to_string()))?;
            String::from_utf8(w.into_inner().unwrap()).unwrap()
        }
    };
    Ok(RunOutput { code, text })
}

fn audit_output(cli: &Cli, command: &str, reports: &[AuditReport], extra: Option<(&str, Value)>) -> Result<RunOutput> {
    let code = if reports.iter().all(AuditReport::passed) { 0 } else { EXIT_AUDIT_FAILED };
    let text = match cli.format {
        Format::Json => {
            let mut v = json!({ "command": command, "reports": reports });
            if let Some((k, x)) = extra {
                v[k] = x;
            }
            serde_json::to_string_pretty(&v).unwrap() + "\n"
        }
        Format::Csv => {
            let mut w = csv::Writer::from_writer(Vec::new());
            let mut write = || -> std::result::Result<(), csv::Error> {
                w.write_record(AuditReport::CSV_HEADER)?;
                for r in reports {
                    w.write_record(r.csv_record())?;
                }
                Ok(())
            };
            write().map_err(|e| Error::InvalidParameter(e.to_string()))?;
            String::from_utf8(w.into_inner().unwrap()).unwrap()
        }
    };
    Ok(RunOutput { code, text })
}

/// Executes a parsed command without touching the output path.
pub fn execute(cli: &Cli) -> Result<RunOutput> {
    let limits = cli.limits();
    let ctx = cli.context();
    match &cli.command {
        Command::FindLine => {
            let input = cli.read_input()?;
            let out = search::find_transverse_line_reduced(&input.hypersurface()?, cli.seed, &limits)?;
            search_output(cli, "find-line", &input, &out)
        }
        Command::FindFlag { r } => {
            let input = cli.read_input()?;
            let out = search::find_very_transverse_flag(&input.hypersurface()?, *r, cli.seed, &limits)?;
            search_output(cli, "find-flag", &input, &out)
        }
        Command::FindReduced { r } => {
            let input = cli.read_input()?;
            let x = input.hypersurface()?;
            let out = if *r + 1 == x.n() {
                search::find_reduced_hyperplane(&x, cli.seed, &limits)?
            } else {
                search::find_reduced_plane_section_chain(&x, *r, cli.seed, &limits)?
            };
            search_output(cli, "find-reduced", &input, &out)
        }
        Command::Count { what, r } => {
            let input = cli.read_input()?;
            let reports = match what {
                CountKind::Lines => audit::count_nontransverse_lines(&input.fixture()?, &ctx)?,
                CountKind::Hyperplanes => audit::count_bad_hyperplanes(&input.fixture()?, &ctx)?.1,
                CountKind::Superspaces => {
                    let r = r.ok_or_else(|| Error::InvalidParameter("count superspaces needs --r".into()))?;
                    audit::superspace_audit(&input.hypersurface()?, r, &ctx)?
                }
            };
            audit_output(cli, "count", &reports, None)
        }
        Command::Audit { what, q, d, n, r, samples, nmax, dmax } => match what {
            AuditKind::All => audit_output(cli, "audit-all", &audit::standard_suite(&ctx)?, None),
            AuditKind::Inequalities => {
                let report = search::check_inequality_lemmas(*nmax, *dmax);
                let reports = audit::audit_inequalities(*nmax, *dmax, &ctx)?;
                audit_output(cli, "audit-inequalities", &reports, Some(("lemmas", json!(report.lemmas))))
            }
            AuditKind::SpaceFilling => {
                let field = field_of_order(q.unwrap_or(2), &limits)?;
                let reports = audit::audit_space_filling(n.unwrap_or(2), &field, *dmax, &ctx)?;
                audit_output(cli, "audit-space-filling", &reports, None)
            }
            AuditKind::Separation => {
                let field = field_of_order(q.unwrap_or(5), &limits)?;
                let (log, report) =
                    audit::separation_search(*samples, &field, n.unwrap_or(3), d.unwrap_or(2), r.unwrap_or(1), &ctx)?;
                audit_output(cli, "audit-separation", &[report], Some(("separations", json!(log))))
            }
        },
    }
}

/// Runs a command line and writes the report. Returns the exit status.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_ERROR } else { 0 };
            let _ = e.print();
            return code;
        }
    };
    let result = match cli.jobs {
        Some(j) => match rayon::ThreadPoolBuilder::new().num_threads(j.max(1)).build() {
            Ok(pool) => pool.install(|| execute(&cli)),
            Err(e) => Err(Error::InvalidParameter(e.to_string())),
        },
        None => execute(&cli),
    };
    let out = match result {
        Ok(o) => o,
        Err(e) => {
            eprintln!("error: {e}");
            return EXIT_ERROR;
        }
    };
    match &cli.out {
        Some(path) => {
            if let Err(e) = std::fs::write(path, &out.text) {
                eprintln!("error: cannot write {}: {e}", path.display());
                return EXIT_ERROR;
            }
        }
        None => print!("{}", out.text),
    }
    out.code
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::collections::BTreeMap;
    use transverse_core::search::GateStatus;

    fn cli(args: &[&str]) -> Cli {
        Cli::try_parse_from(std::iter::once("transverse").chain(args.iter().copied())).unwrap()
    }

    #[test]
    fn theorem_violation_maps_to_exit_2() {
        let input = parse_input("p=5 m=1 n=2\nx0", &Limits::default()).unwrap();
        let mut outcome = SearchOutcome {
            search: "transverse-line",
            found: None,
            tested: 31,
            rejections: BTreeMap::new(),
            gate: GateStatus { q: 5, threshold: 0, outside_hypothesis: false },
            theorem_violation: true,
            seed: 0,
        };
        let c = cli(&["find-line"]);
        assert_eq!(search_output(&c, "find-line", &input, &outcome).unwrap().code, EXIT_THEOREM_VIOLATION);
        outcome.theorem_violation = false;
        assert_eq!(search_output(&c, "find-line", &input, &outcome).unwrap().code, 0);
    }

    #[test]
    fn failed_audit_is_not_a_theorem_violation() {
        let mut reports = audit::audit_inequalities(3, 3, &AuditContext::default()).unwrap();
        let c = cli(&["audit", "inequalities"]);
        assert_eq!(audit_output(&c, "x", &reports, None).unwrap().code, 0);
        reports[0].verdict = audit::Verdict::Fail;
        assert_eq!(audit_output(&c, "x", &reports, None).unwrap().code, EXIT_AUDIT_FAILED);
    }

    #[test]
    fn prime_power_fields() {
        let lim = Limits::default();
        assert_eq!(field_of_order(9, &lim).unwrap().order(), 9);
        assert_eq!(field_of_order(13, &lim).unwrap().degree(), 1);
        assert!(field_of_order(12, &lim).is_err());
        assert!(field_of_order(1, &lim).is_err());
    }
}
