//! `choquet`: command-line front end for the Choquet extension toolkit.
//!
//! Every instance argument accepts a file path, inline JSON, or `-` for stdin.
//! Exit status: 0 on success, 1 when `selftest` finds a violation, 2 for
//! malformed input, 3 when an instance violates a precondition.

use std::fmt::Display;
use std::io::{self, Read, Write};
use std::process::ExitCode;

use choquet_core::extension::level_contributions;
use choquet_core::fubini::{lln_run, lopsided_check, FubiniInstance, FubiniInstanceJson};
use choquet_core::interval::{ae_gap, choquet_interval_with, Extension, IntervalSetFunction, StepFunction};
use choquet_core::predicates::{is_increasing, is_modular, is_submodular, Verdict};
use choquet_core::selftest;
use choquet_core::uncross::{certify_chain_equality, uncross, WeightedFamily};
use choquet_core::variation::{canonical_decomposition, variation_report};
use choquet_core::{choquet, BoundedFunction, GroundSet, SetFunction};
use clap::{Parser, Subcommand, ValueEnum};
use serde::de::DeserializeOwned;
use serde::Serialize;

#[derive(Parser)]
#[command(name = "choquet", version, about = "Choquet extensions of submodular setfunctions")]
struct Cli {
    /// Absolute comparison tolerance for every verdict.
    #[arg(long, global = true, default_value_t = choquet_core::DEFAULT_TOL)]
    tol: f64,
    #[arg(long, global = true, value_enum, default_value_t = Format::Human)]
    format: Format,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Human,
    Json,
    Csv,
}

#[derive(Subcommand)]
enum Command {
    /// Submodularity, monotonicity and modularity, with witnesses.
    Check { phi: String },
    /// Evaluate the Choquet extension at a bounded function.
    ChoquetEval {
        phi: String,
        /// Values of f on the ground set, as a JSON array.
        #[arg(long)]
        f: String,
        /// Also print the level chain (threshold, set, φ, contribution).
        #[arg(long)]
        chain: bool,
    },
    /// Total variation K(φ) and one chain attaining it.
    Variation { phi: String },
    /// Canonical decomposition φ = μ - ν into increasing parts.
    Decompose { phi: String },
    /// Uncross a weighted family into a chain.
    Uncross {
        /// `{"n": .., "entries": [[mask, multiplicity], ..]}`.
        family: String,
        /// Setfunction for the Σφ column and the chain certificate.
        #[arg(long)]
        phi: Option<String>,
    },
    /// Upper-infimum and lower-supremum integrals on the interval algebra.
    IntervalChoquet {
        phi: String,
        /// Step function `{"breakpoints": [..], "values": [..]}`.
        #[arg(long)]
        f: String,
    },
    /// Lopsided Fubini check and empirical-average trace.
    Fubini {
        instance: String,
        #[arg(long, default_value_t = 1000)]
        steps: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Skip the nonnegativity and submodularity requirements on φ.
        #[arg(long)]
        force: bool,
    },
    /// Run the randomized invariant suite.
    Selftest {
        #[arg(long, default_value_t = 7)]
        seed: u64,
    },
}

enum Failure {
    Malformed(String),
    Precondition(String),
    Io(io::Error),
}

impl Failure {
    fn code(&self) -> u8 {
        match self {
            Failure::Malformed(_) | Failure::Io(_) => 2,
            Failure::Precondition(_) => 3,
        }
    }
}

impl Display for Failure {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Failure::Malformed(m) => write!(f, "malformed input: {m}"),
            Failure::Precondition(m) => write!(f, "precondition violated: {m}"),
            Failure::Io(e) => write!(f, "i/o error: {e}"),
        }
    }
}

impl From<io::Error> for Failure {
    fn from(e: io::Error) -> Self {
        Failure::Io(e)
    }
}

impl From<csv::Error> for Failure {
    fn from(e: csv::Error) -> Self {
        Failure::Io(e.into())
    }
}

impl From<choquet_core::Error> for Failure {
    fn from(e: choquet_core::Error) -> Self {
        Failure::Precondition(e.to_string())
    }
}

type Outcome = Result<ExitCode, Failure>;

/// Inline JSON, `-` for stdin, or a path.
fn load_text(arg: &str) -> Result<String, Failure> {
    let trimmed = arg.trim_start();
    if trimmed.starts_with('{') || trimmed.starts_with('[') {
        return Ok(arg.to_string());
    }
    if arg == "-" {
        let mut buf = String::new();
        io::stdin().read_to_string(&mut buf)?;
        return Ok(buf);
    }
    std::fs::read_to_string(arg).map_err(|e| Failure::Malformed(format!("{arg}: {e}")))
}

fn parse<T: DeserializeOwned>(arg: &str) -> Result<T, Failure> {
    serde_json::from_str(&load_text(arg)?).map_err(|e| Failure::Malformed(e.to_string()))
}

fn print_json(out: &mut impl Write, value: &impl Serialize) -> io::Result<()> {
    serde_json::to_writer_pretty(&mut *out, value)?;
    writeln!(out)
}

fn verdict_line(name: &str, v: &Verdict, ground: &GroundSet, sep: &str) -> String {
    match v.witness {
        None => format!("{name}: yes"),
        Some(w) => format!(
            "{name}: no (witness {} {sep} {}; violation {})",
            ground.describe(w.x),
            ground.describe(w.y),
            w.violation
        ),
    }
}

fn check(phi: &SetFunction, tol: f64, format: Format, out: &mut impl Write) -> Outcome {
    let ground = phi.ground();
    let sub = is_submodular(phi, tol);
    let inc = is_increasing(phi, tol);
    let modular = is_modular(phi, tol);
    match format {
        Format::Human => {
            let inc_text = match inc.witness {
                None => "increasing: yes".to_string(),
                Some(w) => format!("increasing: no (witness {} ⊆ {})", ground.describe(w.x), ground.describe(w.y)),
            };
            let sub_text = verdict_line("submodular", &sub, ground, "and");
            writeln!(out, "{sub_text}; {inc_text}")?;
            writeln!(out, "{}", verdict_line("modular", &modular, ground, "and"))?;
        }
        Format::Json => {
            #[derive(Serialize)]
            struct Report {
                submodular: Verdict,
                increasing: Verdict,
                modular: Verdict,
            }
            print_json(out, &Report { submodular: sub, increasing: inc, modular })?;
        }
        Format::Csv => {
            let mut w = csv::Writer::from_writer(out);
            w.write_record(["property", "holds", "x", "y", "violation"])?;
            for (name, v) in [("submodular", sub), ("increasing", inc), ("modular", modular)] {
                let (x, y, gap) = v
                    .witness
                    .map(|w| (ground.describe(w.x), ground.describe(w.y), w.violation.to_string()))
                    .unwrap_or_default();
                w.write_record([name, if v.holds { "yes" } else { "no" }, &x, &y, &gap])?;
            }
            w.flush()?;
        }
    }
    Ok(ExitCode::SUCCESS)
}

fn choquet_eval(phi: &SetFunction, f_arg: &str, show_chain: bool, format: Format, out: &mut impl Write) -> Outcome {
    let f: BoundedFunction = parse(f_arg)?;
    let value = choquet(phi, &f)?;
    // Negative values are lifted by ‖f‖; the chain shown is that of f + shift.
    let shift = if f.min() < 0.0 { f.norm() } else { 0.0 };
    let rows = level_contributions(phi, &f.shift(shift))?;
    let ground = phi.ground();
    match format {
        Format::Json => {
            #[derive(Serialize)]
            struct Link {
                threshold: f64,
                set: String,
                phi: f64,
                contribution: f64,
            }
            #[derive(Serialize)]
            struct Report {
                value: f64,
                shift: f64,
                chain: Vec<Link>,
            }
            let chain = rows
                .iter()
                .map(|&(threshold, s, phi, contribution)| Link { threshold, set: ground.describe(s), phi, contribution })
                .collect();
            print_json(out, &Report { value, shift, chain })?;
        }
        Format::Human | Format::Csv => {
            if format == Format::Human {
                writeln!(out, "{value}")?;
                if shift > 0.0 && show_chain {
                    writeln!(out, "shift: {shift} (chain of f + shift; subtract shift·φ(J) = {})", shift * phi.full_value())?;
                }
            }
            if show_chain || format == Format::Csv {
                let mut w = csv::Writer::from_writer(out);
                w.write_record(["threshold", "mask", "phi", "contribution"])?;
                for (t, s, v, c) in rows {
                    w.write_record([t.to_string(), ground.describe(s), v.to_string(), c.to_string()])?;
                }
                w.flush()?;
            }
        }
    }
    Ok(ExitCode::SUCCESS)
}

fn variation(phi: &SetFunction, format: Format, out: &mut impl Write) -> Outcome {
    let report = variation_report(phi);
    let ground = phi.ground();
    match format {
        Format::Human => {
            writeln!(out, "K = {}", report.variation)?;
            let links: Vec<String> = report.chain.iter().map(|&s| ground.describe(s)).collect();
            writeln!(out, "chain: {}", links.join(" ⊂ "))?;
        }
        Format::Json => print_json(out, &report)?,
        Format::Csv => {
            let mut w = csv::Writer::from_writer(out);
            w.write_record(["step", "mask", "phi"])?;
            for (i, &s) in report.chain.iter().enumerate() {
                w.write_record([i.to_string(), ground.describe(s), phi.value(s).to_string()])?;
            }
            w.flush()?;
        }
    }
    Ok(ExitCode::SUCCESS)
}

fn decompose(phi: &SetFunction, format: Format, out: &mut impl Write) -> Outcome {
    let d = canonical_decomposition(phi);
    if format == Format::Csv {
        let mut w = csv::Writer::from_writer(out);
        w.write_record(["mask", "phi", "mu", "nu"])?;
        for s in phi.ground().masks() {
            let i = s.index();
            w.write_record([phi.ground().describe(s), phi.value(s).to_string(), d.mu[i].to_string(), d.nu[i].to_string()])?;
        }
        w.flush()?;
    } else {
        #[derive(Serialize)]
        struct Report<'a> {
            mu: &'a [f64],
            nu: &'a [f64],
            #[serde(rename = "K")]
            k: f64,
        }
        print_json(out, &Report { mu: &d.mu, nu: &d.nu, k: d.variation })?;
    }
    Ok(ExitCode::SUCCESS)
}

fn uncross_cmd(family: &WeightedFamily, phi: Option<&SetFunction>, tol: f64, format: Format, out: &mut impl Write) -> Outcome {
    if let Some(p) = phi {
        if p.n() != family.n() {
            return Err(Failure::Precondition(format!("family on {} elements, φ on {}", family.n(), p.n())));
        }
    }
    let trace = uncross(family, phi);
    let certificate = phi.map(|p| certify_chain_equality(p, &trace.final_family, tol)).transpose()?;
    if format == Format::Json {
        #[derive(Serialize)]
        struct Report<'a> {
            trace: &'a choquet_core::uncross::UncrossTrace,
            step_bound: u64,
            certificate: Option<choquet_core::uncross::ChainCertificate>,
        }
        print_json(out, &Report { trace: &trace, step_bound: trace.step_bound(), certificate })?;
        return Ok(ExitCode::SUCCESS);
    }
    let opt = |v: Option<f64>| v.map(|x| x.to_string()).unwrap_or_default();
    let ground = GroundSet::new(family.n())?;
    let name = |s| ground.describe(s);
    {
        let mut w = csv::Writer::from_writer(&mut *out);
        w.write_record(["step", "first", "second", "union", "intersection", "potential", "phi_sum"])?;
        w.write_record([
            "0".to_string(),
            String::new(),
            String::new(),
            String::new(),
            String::new(),
            trace.initial.potential().to_string(),
            opt(phi.map(|p| trace.initial.phi_sum(p))),
        ])?;
        for (k, step) in trace.steps.iter().enumerate() {
            w.write_record([
                (k + 1).to_string(),
                name(step.before.0),
                name(step.before.1),
                name(step.after.0),
                name(step.after.1),
                step.potential_after.to_string(),
                opt(step.phi_sum_after),
            ])?;
        }
        w.flush()?;
    }
    if format == Format::Human {
        let mut links = trace.final_family.entries().to_vec();
        links.sort_by_key(|(s, _)| s.len());
        let chain: Vec<String> = links.iter().map(|&(s, a)| format!("{a}×{}", name(s))).collect();
        writeln!(out, "final chain: {}", chain.join(" ⊂ "))?;
        writeln!(out, "steps: {} (bound |HH|·n² = {})", trace.steps.len(), trace.step_bound())?;
        if let Some(c) = certificate {
            writeln!(out, "chain equality: ŵφ(h) = {}, Σ aφ(H) = {}, equal: {}", c.lhs, c.rhs, if c.equal { "yes" } else { "no" })?;
        }
    }
    Ok(ExitCode::SUCCESS)
}

fn interval_choquet(phi: &IntervalSetFunction, f: &StepFunction, tol: f64, format: Format, out: &mut impl Write) -> Outcome {
    let ui = choquet_interval_with(phi, f, Extension::UpperInfimum);
    let ls = choquet_interval_with(phi, f, Extension::LowerSupremum);
    let gap = ae_gap(phi, f, tol);
    match format {
        Format::Human => {
            writeln!(out, "ui: {ui}")?;
            writeln!(out, "ls: {ls}")?;
            writeln!(out, "exceptional thresholds: {:?} (measure {})", gap.thresholds(), gap.measure())?;
        }
        Format::Json => {
            #[derive(Serialize)]
            struct Report {
                ui: f64,
                ls: f64,
                gap: choquet_core::interval::AeGap,
            }
            print_json(out, &Report { ui, ls, gap })?;
        }
        Format::Csv => {
            let mut w = csv::Writer::from_writer(out);
            w.write_record(["extension", "value"])?;
            w.write_record(["ui", &ui.to_string()])?;
            w.write_record(["ls", &ls.to_string()])?;
            w.flush()?;
        }
    }
    Ok(ExitCode::SUCCESS)
}

fn fubini(inst: &FubiniInstance, steps: usize, seed: u64, tol: f64, format: Format, out: &mut impl Write) -> Outcome {
    let check = lopsided_check(inst, tol);
    let trace = lln_run(inst, steps, seed, tol)?;
    if format == Format::Json {
        #[derive(Serialize)]
        struct Report<'a> {
            lopsided: choquet_core::fubini::LopsidedReport,
            trace: &'a choquet_core::fubini::LlnTrace,
        }
        print_json(out, &Report { lopsided: check, trace: &trace })?;
        return Ok(ExitCode::SUCCESS);
    }
    {
        let mut w = csv::Writer::from_writer(&mut *out);
        for record in &trace.records {
            w.serialize(record)?;
        }
        w.flush()?;
    }
    let summary = format!("summary: lhs={}, rhs={}, slack={}", check.lhs, check.rhs, check.slack);
    if format == Format::Human {
        writeln!(out, "{summary}")?;
        writeln!(
            out,
            "finite-inequality violations: {}; Lipschitz violations: {}; final gap {} (standard error {})",
            trace.fin_ineq_violations.len(),
            trace.lipschitz_violations.len(),
            trace.final_gap(),
            trace.standard_error()
        )?;
    } else {
        eprintln!("{summary}");
    }
    Ok(ExitCode::SUCCESS)
}

fn run_selftest(seed: u64, format: Format, out: &mut impl Write) -> Outcome {
    let report = selftest::run_all(seed);
    match format {
        Format::Json => print_json(out, &report)?,
        Format::Csv => {
            let mut w = csv::Writer::from_writer(out);
            w.write_record(["criterion", "name", "passed", "checks", "detail"])?;
            for c in &report.criteria {
                w.write_record([c.id.to_string(), c.name.to_string(), c.passed.to_string(), c.checks.to_string(), c.detail.clone()])?;
            }
            w.flush()?;
        }
        Format::Human => {
            for c in &report.criteria {
                writeln!(out, "{c}")?;
            }
            let passed = report.criteria.iter().filter(|c| c.passed).count();
            writeln!(out, "selftest seed {seed}: {passed}/{} criteria passed", report.criteria.len())?;
        }
    }
    Ok(if report.passed() { ExitCode::SUCCESS } else { ExitCode::from(1) })
}

fn run(cli: Cli) -> Outcome {
    if !(cli.tol > 0.0 && cli.tol.is_finite()) {
        return Err(Failure::Malformed(format!("--tol must be positive, got {}", cli.tol)));
    }
    let stdout = io::stdout();
    let mut out = io::BufWriter::new(stdout.lock());
    let (tol, format) = (cli.tol, cli.format);
    let code = match cli.command {
        Command::Check { phi } => check(&parse(&phi)?, tol, format, &mut out)?,
        Command::ChoquetEval { phi, f, chain } => choquet_eval(&parse(&phi)?, &f, chain, format, &mut out)?,
        Command::Variation { phi } => variation(&parse(&phi)?, format, &mut out)?,
        Command::Decompose { phi } => decompose(&parse(&phi)?, format, &mut out)?,
        Command::Uncross { family, phi } => {
            let phi: Option<SetFunction> = phi.as_deref().map(parse).transpose()?;
            uncross_cmd(&parse(&family)?, phi.as_ref(), tol, format, &mut out)?
        }
        Command::IntervalChoquet { phi, f } => interval_choquet(&parse(&phi)?, &parse(&f)?, tol, format, &mut out)?,
        Command::Fubini { instance, steps, seed, force } => {
            let raw: FubiniInstanceJson = parse(&instance)?;
            let inst = FubiniInstance::from_json(raw, force, tol)?;
            fubini(&inst, steps, seed, tol, format, &mut out)?
        }
        Command::Selftest { seed } => run_selftest(seed, format, &mut out)?,
    };
    out.flush()?;
    Ok(code)
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(code) => code,
        Err(failure) => {
            eprintln!("choquet: {failure}");
            ExitCode::from(failure.code())
        }
    }
}
