//! `splitcode`: construct, verify, search, bound, attack, and export
//! splitting designs and their authentication codes.

mod manifest;

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use splitcode_core::acode::{
    design_to_acode, evaluate_deception, huber_pd_bound, huber_rule_bound, render, ACode, ACodeError, AcceptanceRule,
    ExactGuard,
};
use splitcode_core::combinators::{construct_family, FamilyError};
use splitcode_core::design::{binomial, divisibility_ok, known_nonexistent, AnyDesign, DesignFile, DesignFileError};
use splitcode_core::ingredients::cache::{write_atomic, IngredientCache, IngredientRequest};
use splitcode_core::ingredients::gdd::ProviderOptions;
use splitcode_core::ingredients::search::{search_splitting_design, Budget, SearchError};

use manifest::RunManifest;

/// Exit codes. Stable across releases.
mod exit {
    pub const OK: u8 = 0;
    pub const INVALID: u8 = 1;
    pub const NOT_ADMISSIBLE: u8 = 2;
    pub const INGREDIENT: u8 = 3;
    pub const PARSE: u8 = 4;
    pub const BUDGET: u8 = 5;
    pub const TOO_LARGE: u8 = 6;
}

#[derive(Parser, Debug)]
#[command(name = "splitcode", version, about = "Splitting t-designs and optimal splitting A-codes")]
struct Cli {
    #[command(flatten)]
    global: Global,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug, Clone)]
struct Global {
    /// Worker threads (default: all cores). Output does not depend on it.
    #[arg(long, global = true)]
    threads: Option<usize>,
    /// Ingredient cache directory (overrides SPLITCODE_CACHE).
    #[arg(long, global = true)]
    cache_dir: Option<PathBuf>,
    /// Seed for every randomized step.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Total search moves across restarts.
    #[arg(long, global = true, default_value_t = Budget::default().moves)]
    budget: u64,
    /// Independent search restarts sharing the budget.
    #[arg(long, global = true, default_value_t = Budget::default().restarts)]
    restarts: u32,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
enum Family {
    #[value(name = "2-3x5")]
    TwoThreeByFive,
    #[value(name = "2-385")]
    Two385,
    #[value(name = "3-3x2")]
    ThreeThreeByTwo,
}

impl Family {
    fn name(self) -> &'static str {
        match self {
            Family::TwoThreeByFive => "2-3x5",
            Family::Two385 => "2-385",
            Family::ThreeThreeByTwo => "3-3x2",
        }
    }
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
enum ExportFormat {
    AcodeJson,
    AcodeCsv,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
enum Acceptance {
    NewSource,
    AnyValid,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Build a member of one of the design families.
    Construct {
        #[arg(value_enum)]
        family_pos: Option<Family>,
        #[arg(long, value_enum, conflicts_with = "family_pos")]
        family: Option<Family>,
        #[arg(long)]
        v: Option<usize>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Check a design file exhaustively.
    Verify { path: PathBuf },
    /// Divisibility, rule bound, deception bounds, and nonexistence.
    Bounds { t: u32, v: u64, k: u32, c: u32 },
    /// Seeded search for a splitting t-(v, k x c, 1) design.
    Search {
        t: u32,
        v: u64,
        k: u32,
        c: u32,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Exact spoofing-attack success probability of a design's code.
    Attack {
        path: PathBuf,
        #[arg(long)]
        order: usize,
        #[arg(long, value_enum, default_value = "new-source")]
        acceptance: Acceptance,
    },
    /// Write a design's A-code as JSON or as a CSV matrix.
    Export {
        path: PathBuf,
        #[arg(long, value_enum)]
        format: ExportFormat,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

/// Outcome of a command: exit code plus manifest details.
struct Outcome {
    code: u8,
    artifacts: Vec<String>,
    verification: Value,
}

impl Outcome {
    fn fail(code: u8, message: impl std::fmt::Display) -> Self {
        eprintln!("error: {message}");
        Self { code, artifacts: vec![], verification: Value::Null }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { exit::PARSE } else { exit::OK });
        }
    };
    if let Some(n) = cli.global.threads {
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(n).build_global() {
            eprintln!("error: cannot size the thread pool: {e}");
        }
    }
    let mut manifest = RunManifest::start(&cli.global, &cli.command);
    let outcome = run(&cli);
    let out = match &cli.command {
        Command::Construct { out, .. } | Command::Search { out, .. } | Command::Export { out, .. } => out.clone(),
        _ => None,
    };
    manifest.finish(outcome.code, outcome.artifacts, outcome.verification);
    manifest.emit(out.as_deref());
    ExitCode::from(outcome.code)
}

fn options(g: &Global) -> ProviderOptions {
    ProviderOptions {
        seed: g.seed,
        budget: Budget { moves: g.budget, restarts: g.restarts },
        cache: Some(IngredientCache::resolve(g.cache_dir.as_deref())),
    }
}

fn run(cli: &Cli) -> Outcome {
    let g = &cli.global;
    match &cli.command {
        Command::Construct { family_pos, family, v, out } => match family_pos.or(*family) {
            Some(f) => construct(f, *v, out.as_deref(), g),
            None => Outcome::fail(exit::PARSE, "construct needs a family: 2-3x5, 2-385, or 3-3x2"),
        },
        Command::Verify { path } => verify(path),
        Command::Bounds { t, v, k, c } => bounds(*t, *v, *k, *c),
        Command::Search { t, v, k, c, out } => search(*t, *v, *k, *c, out.as_deref(), g),
        Command::Attack { path, order, acceptance } => attack(path, *order, *acceptance),
        Command::Export { path, format, out } => export(path, *format, out.as_deref()),
    }
}

fn family_exit(e: &FamilyError) -> u8 {
    match e {
        FamilyError::NotAdmissible { .. } => exit::NOT_ADMISSIBLE,
        FamilyError::UnknownFamily(_) => exit::PARSE,
        FamilyError::Combinator(_) => exit::INVALID,
        _ => exit::INGREDIENT,
    }
}

/// Verifies, then writes atomically to `out` or prints to stdout.
fn emit_design(design: &AnyDesign, provenance: Value, out: Option<&Path>) -> Outcome {
    let report = design.verify();
    let verification = serde_json::to_value(&report).expect("reports serialize");
    if !report.valid {
        return Outcome { verification, ..Outcome::fail(exit::INVALID, "refusing to write an invalid design") };
    }
    let text = design.to_canonical_json(provenance);
    write_output(&text, out, verification)
}

fn write_output(text: &str, out: Option<&Path>, verification: Value) -> Outcome {
    match out {
        Some(path) => match write_atomic(path, text.as_bytes()) {
            Ok(()) => Outcome { code: exit::OK, artifacts: vec![path.display().to_string()], verification },
            Err(e) => Outcome::fail(exit::INGREDIENT, format!("cannot write {}: {e}", path.display())),
        },
        None => {
            print!("{text}");
            Outcome { code: exit::OK, artifacts: vec!["<stdout>".into()], verification }
        }
    }
}

fn construct(family: Family, v: Option<usize>, out: Option<&Path>, g: &Global) -> Outcome {
    match construct_family(family.name(), v, &options(g)) {
        Ok((design, trace)) => {
            eprintln!("constructed {} with v = {}: {} blocks", family.name(), design.v, design.blocks.len());
            let provenance = json!({ "family": family.name(), "v": design.v, "trace": trace.to_value() });
            emit_design(&AnyDesign::SplittingDesign(design), provenance, out)
        }
        Err(e) => Outcome::fail(family_exit(&e), e),
    }
}

fn read_design(path: &Path) -> Result<AnyDesign, Outcome> {
    DesignFile::read(path).and_then(DesignFile::into_design).map_err(|e| match e {
        DesignFileError::Io(e) => Outcome::fail(exit::PARSE, format!("cannot read {}: {e}", path.display())),
        other => Outcome::fail(exit::PARSE, other),
    })
}

fn verify(path: &Path) -> Outcome {
    let design = match read_design(path) {
        Ok(d) => d,
        Err(o) => return o,
    };
    let report = design.verify();
    let verification = serde_json::to_value(&report).expect("reports serialize");
    if report.valid {
        println!(
            "valid {}: {} blocks, {} qualifying subsets covered",
            design.kind().as_str(),
            report.blocks,
            report.qualifying_subsets
        );
        Outcome { code: exit::OK, artifacts: vec![], verification }
    } else {
        let witness = report.witness.as_ref().map(|w| w.to_string()).unwrap_or_default();
        println!("invalid {}: {witness}", design.kind().as_str());
        Outcome { code: exit::INVALID, artifacts: vec![], verification }
    }
}

fn bounds(t: u32, v: u64, k: u32, c: u32) -> Outcome {
    println!("parameters: t = {t}, v = {v}, k = {k}, c = {c}, lambda = 1");
    let failing = divisibility_ok(t, v, k, c, 1).err();
    for s in 0..=t.min(k) {
        let lhs = binomial(v.saturating_sub(s as u64), (t - s) as u64);
        let modulus = (c as u128).pow(t - s) * binomial((k - s) as u64, (t - s) as u64);
        let ok = modulus != 0 && lhs % modulus == 0;
        println!("divisibility s = {s}: C({}, {}) mod {modulus} = {}  {}", v.saturating_sub(s as u64), t - s,
            if modulus == 0 { 0 } else { lhs % modulus }, if ok { "pass" } else { "fail" });
    }
    if (t as u64) <= v && t <= k {
        println!("rule bound: {}", render(&huber_rule_bound(t as usize, v as usize, k as usize, c as usize)));
    }
    for i in 0..t.min(k) as usize {
        if (i as u64) < v {
            println!("P_d{i} bound: {}", render(&huber_pd_bound(i, k as usize, c as usize, v as usize)));
        }
    }
    match known_nonexistent(t, v, k, c, 1) {
        Some(n) => println!("nonexistent: yes ({})", n.reason),
        None => println!("nonexistent: no"),
    }
    Outcome {
        code: exit::OK,
        artifacts: vec![],
        verification: json!({ "divisibility": failing.is_none(), "known_nonexistent": known_nonexistent(t, v, k, c, 1).is_some() }),
    }
}

fn search(t: u32, v: u64, k: u32, c: u32, out: Option<&Path>, g: &Global) -> Outcome {
    let opts = options(g);
    let (tu, vu, ku, cu) = (t as usize, v as usize, k as usize, c as usize);
    match search_splitting_design(tu, vu, ku, cu, opts.seed, opts.budget) {
        Ok((design, sys, stats)) => {
            eprintln!(
                "found splitting {t}-({v},{k}x{c},1): {} blocks; {} moves over {} restarts, winner {:?}",
                design.blocks.len(),
                stats.moves,
                stats.restarts,
                stats.winner
            );
            let provenance = json!({
                "search": {
                    "seed": opts.seed,
                    "budget": opts.budget,
                    "stats": stats,
                    "modulus": sys.modulus,
                    "increment": sys.increment,
                    "base_blocks": sys.base_blocks.iter().map(|b| b.rows().to_vec()).collect::<Vec<_>>(),
                }
            });
            let any = AnyDesign::SplittingDesign(design);
            let outcome = emit_design(&any, provenance.clone(), out);
            if outcome.code == exit::OK {
                if let Some(cache) = &opts.cache {
                    if let Err(e) = cache.put(&IngredientRequest::splitting_design(tu, vu, ku, cu), &any, provenance) {
                        eprintln!("warning: not cached: {e}");
                    }
                }
            }
            outcome
        }
        Err(e @ (SearchError::Inadmissible(_) | SearchError::KnownNonexistent(_))) => {
            Outcome::fail(exit::NOT_ADMISSIBLE, e)
        }
        Err(e @ SearchError::BudgetExhausted(_)) => Outcome::fail(exit::BUDGET, e),
        Err(e @ SearchError::Unsupported(_)) => Outcome::fail(exit::TOO_LARGE, e),
    }
}

/// Reads a design file (verified) or an A-code JSON file.
fn read_code(path: &Path) -> Result<ACode, Outcome> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Outcome::fail(exit::PARSE, format!("cannot read {}: {e}", path.display())))?;
    if let Ok(file) = DesignFile::parse(&text) {
        let design = file.into_design().map_err(|e| Outcome::fail(exit::PARSE, e))?;
        let AnyDesign::SplittingDesign(d) = design else {
            return Err(Outcome::fail(exit::INVALID, "A-codes come from splitting designs only"));
        };
        return design_to_acode(&d).map_err(|e| Outcome::fail(exit::INVALID, e));
    }
    ACode::from_json(&text).map_err(|e| match e {
        ACodeError::Parse(_) => Outcome::fail(exit::PARSE, format!("{} is neither a design nor an A-code", path.display())),
        other => Outcome::fail(exit::INVALID, other),
    })
}

fn attack(path: &Path, order: usize, acceptance: Acceptance) -> Outcome {
    let code = match read_code(path) {
        Ok(c) => c,
        Err(o) => return o,
    };
    let rule = match acceptance {
        Acceptance::NewSource => AcceptanceRule::NewSource,
        Acceptance::AnyValid => AcceptanceRule::AnyValid,
    };
    match evaluate_deception(&code, order, &ExactGuard::default(), rule) {
        Ok(report) => {
            println!("{report}");
            let verification = json!({
                "order": report.order,
                "probability": render(&report.probability),
                "bound": render(&report.bound),
                "tight": report.tight,
            });
            Outcome { code: exit::OK, artifacts: vec![], verification }
        }
        Err(e @ ACodeError::TooLargeForExact { .. }) => Outcome::fail(exit::TOO_LARGE, e),
        Err(e @ ACodeError::OrderTooLarge { .. }) => Outcome::fail(exit::NOT_ADMISSIBLE, e),
        Err(e) => Outcome::fail(exit::INVALID, e),
    }
}

fn export(path: &Path, format: ExportFormat, out: Option<&Path>) -> Outcome {
    let design = match read_design(path) {
        Ok(d) => d,
        Err(o) => return o,
    };
    let AnyDesign::SplittingDesign(d) = design else {
        return Outcome::fail(exit::INVALID, "A-codes come from splitting designs only");
    };
    let code = match design_to_acode(&d) {
        Ok(c) => c,
        Err(e) => return Outcome::fail(exit::INVALID, e),
    };
    let text = match format {
        ExportFormat::AcodeJson => code.to_json(),
        ExportFormat::AcodeCsv => code.to_csv(),
    };
    write_output(&text, out, json!({ "valid": true, "rules": code.rules.len(), "sources": code.sources }))
}
