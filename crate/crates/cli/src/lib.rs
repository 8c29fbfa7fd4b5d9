//! Command-line front end: solve, certify, verify, and generate.
//!
//! Exit codes are a function of the semantic outcome only:
//!
//! * `solve` — 0 when an equilibrium within the thresholds exists, 1 when
//!   not, 2 on malformed input;
//! * `certify` — 0 when the produced certificate verifies, 1 when no payoff
//!   lies in the interval, 2 on malformed input, 3 when a certificate
//!   unexpectedly fails verification (an internal bug, never data);
//! * `verify` — 0 when the profile is a weak subgame perfect equilibrium,
//!   1 when a profitable deviation exists, 2 on malformed input;
//! * `generate` — 0 on success, 2 on malformed formulas or parameters.
//!
//! All JSON output is canonically ordered so reruns are byte-identical.

use std::fmt;
use std::fs;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use wspe_core::fixpoint::{decide_constraint, Decision};
use wspe_core::game::{Game, ObjectiveClass, Payoff, Vertex};
use wspe_core::json as schema;
use wspe_core::reductions::{
    parse_qdimacs, qbf_to_game, random_game, QbfVariant, RandomGameParams,
};
use wspe_core::strategy::{outcome_from, synthesize_profile, verify_weak_spe};
use wspe_core::witness::{build_witness, check_goodness, Compaction};

#[derive(Parser)]
#[command(
    name = "wspe",
    about = "Decide constrained existence of weak subgame perfect equilibria and certify them",
    long_about = "Decides whether a multiplayer Boolean game on a graph admits a weak subgame \
                  perfect equilibrium with payoff between --lower and --upper (componentwise, \
                  player 1 first), and can synthesize and verify a finite-memory strategy \
                  profile as a certificate. Payoff bitstrings list player 1 first: \"01\" gives \
                  player 1 gain 0 and player 2 gain 1."
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Decide the constrained existence problem and print the fixpoint.
    Solve(SolveArgs),
    /// Solve, then build, synthesize, and verify a full certificate.
    Certify(SolveArgs),
    /// Check a stored strategy profile against a game.
    Verify(VerifyArgs),
    /// Produce game files.
    #[command(subcommand)]
    Generate(GenerateCommand),
}

#[derive(Args)]
struct SolveArgs {
    /// Game description in the JSON schema.
    #[arg(long)]
    game: PathBuf,
    /// Lower payoff threshold, e.g. "01"; defaults to all zeros.
    #[arg(long)]
    lower: Option<String>,
    /// Upper payoff threshold; defaults to all ones.
    #[arg(long)]
    upper: Option<String>,
    /// Also write the JSON output to this path.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Output sections to include (fixpoint, trace, witness, profile).
    #[arg(long, value_delimiter = ',')]
    emit: Option<Vec<EmitSection>>,
}

#[derive(Args)]
struct VerifyArgs {
    #[arg(long)]
    game: PathBuf,
    /// Strategy profile in the JSON schema emitted by `certify`.
    #[arg(long)]
    profile: PathBuf,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Subcommand)]
enum GenerateCommand {
    /// Reduce a quantified Boolean formula to a game plus thresholds.
    Qbf(GenerateQbfArgs),
    /// Sample a seeded random game.
    Random(GenerateRandomArgs),
}

#[derive(Args)]
struct GenerateQbfArgs {
    /// Formula in the QDIMACS-like format (`p qbf m n` header).
    #[arg(long)]
    formula: PathBuf,
    #[arg(long, value_enum, default_value_t = VariantArg::Reach)]
    variant: VariantArg,
    /// Game file to write; thresholds go to `<out>.constraint.json`.
    #[arg(long)]
    out: PathBuf,
}

#[derive(Args)]
struct GenerateRandomArgs {
    #[arg(long)]
    vertices: usize,
    #[arg(long)]
    players: usize,
    #[arg(long, value_parser = ObjectiveClass::from_str)]
    objective: ObjectiveClass,
    #[arg(long, default_value_t = 0.3)]
    density: f64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long)]
    out: PathBuf,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum VariantArg {
    Reach,
    Safety,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum EmitSection {
    Fixpoint,
    Trace,
    Witness,
    Profile,
}

struct CliError(String);

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl<E: std::error::Error> From<E> for CliError {
    fn from(e: E) -> Self {
        CliError(e.to_string())
    }
}

/// Parses arguments and runs the selected command, returning the exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(err) => {
            // Help and version print to stdout and succeed.
            let code = if err.use_stderr() { 2 } else { 0 };
            let _ = err.print();
            return code;
        }
    };
    let outcome = match cli.command {
        Command::Solve(args) => cmd_solve(&args, false),
        Command::Certify(args) => cmd_solve(&args, true),
        Command::Verify(args) => cmd_verify(&args),
        Command::Generate(GenerateCommand::Qbf(args)) => cmd_generate_qbf(&args),
        Command::Generate(GenerateCommand::Random(args)) => cmd_generate_random(&args),
    };
    match outcome {
        Ok((value, code, out)) => {
            let mut text = serde_json::to_string_pretty(&value).expect("serializable output");
            text.push('\n');
            print!("{text}");
            if let Some(path) = out {
                if let Err(e) = fs::write(&path, &text) {
                    eprintln!("error: cannot write {}: {e}", path.display());
                    return 2;
                }
            }
            code
        }
        Err(e) => {
            eprintln!("error: {e}");
            2
        }
    }
}

fn load_game(path: &Path) -> Result<(Game, Vertex), CliError> {
    let text = fs::read_to_string(path)
        .map_err(|e| CliError(format!("cannot read {}: {e}", path.display())))?;
    let game = schema::game_from_json_str(&text)?;
    let initial = game
        .initial()
        .ok_or_else(|| CliError("the game file fixes no initial vertex".into()))?;
    Ok((game, initial))
}

fn parse_threshold(raw: &Option<String>, game: &Game, default: Payoff) -> Result<Payoff, CliError> {
    let Some(s) = raw else {
        return Ok(default);
    };
    let payoff = Payoff::parse(s)?;
    if payoff.num_players() != game.num_players() {
        return Err(CliError(format!(
            "threshold {s:?} has {} components but the game has {} players",
            payoff.num_players(),
            game.num_players()
        )));
    }
    Ok(payoff)
}

fn emit_set(args: &SolveArgs, default: &[EmitSection]) -> Vec<EmitSection> {
    args.emit.clone().unwrap_or_else(|| default.to_vec())
}

type CmdResult = Result<(Value, i32, Option<PathBuf>), CliError>;

fn decision_value(decision: &Decision, emit: &[EmitSection]) -> Value {
    let mut value = json!({
        "exists": decision.exists,
        "payoff": decision.payoff.map(|p| p.to_string()),
        "rounds": decision.trace.rounds,
    });
    let obj = value.as_object_mut().expect("object literal");
    if emit.contains(&EmitSection::Fixpoint) {
        obj.insert("fixpoint".into(), schema::table_to_value(&decision.table));
    }
    if emit.contains(&EmitSection::Trace) {
        obj.insert("trace".into(), schema::trace_to_value(&decision.trace));
    }
    if let Some(product) = &decision.product {
        obj.insert(
            "product".into(),
            schema::product_to_value(&product.structure),
        );
    }
    value
}

fn cmd_solve(args: &SolveArgs, certify: bool) -> CmdResult {
    let (game, initial) = load_game(&args.game)?;
    let lower = parse_threshold(&args.lower, &game, Payoff::zeros(game.num_players()))?;
    let upper = parse_threshold(&args.upper, &game, Payoff::ones(game.num_players()))?;
    let decision = decide_constraint(&game, initial, &lower, &upper)?;
    if !certify {
        let emit = emit_set(args, &[EmitSection::Fixpoint, EmitSection::Trace]);
        let value = decision_value(&decision, &emit);
        let code = if decision.exists { 0 } else { 1 };
        return Ok((value, code, args.out.clone()));
    }

    let emit = emit_set(args, &[EmitSection::Witness, EmitSection::Profile]);
    let mut value = decision_value(&decision, &emit);
    let Some(payoff) = decision.payoff else {
        return Ok((value, 1, args.out.clone()));
    };
    // From here on every failure is an internal inconsistency: the decision
    // said an equilibrium exists, so the certificate chain must go through.
    let (solved, start, compaction) = match &decision.product {
        Some(product) => (
            &product.game,
            product.initial,
            Compaction::Product(&product.structure),
        ),
        None => (&game, initial, Compaction::General),
    };
    let obj = value.as_object_mut().expect("object literal");
    let fail = |obj: &mut serde_json::Map<String, Value>, message: String| {
        obj.insert("certificate_error".into(), json!(message));
    };
    let witness = match build_witness(solved, &decision.table, start, &payoff, compaction) {
        Ok(witness) => witness,
        Err(e) => {
            fail(obj, format!("witness construction failed: {e}"));
            return Ok((value, 3, args.out.clone()));
        }
    };
    if emit.contains(&EmitSection::Witness) {
        obj.insert("witness".into(), schema::witness_to_value(&witness));
    }
    let goodness = match check_goodness(&witness, solved) {
        Ok(report) => report,
        Err(e) => {
            fail(obj, format!("goodness check failed: {e}"));
            return Ok((value, 3, args.out.clone()));
        }
    };
    if !goodness.good {
        fail(
            obj,
            format!("witness is not good: {:?}", goodness.violations),
        );
        return Ok((value, 3, args.out.clone()));
    }
    let profile = match synthesize_profile(&witness, solved) {
        Ok(profile) => profile,
        Err(e) => {
            fail(obj, format!("synthesis failed: {e}"));
            return Ok((value, 3, args.out.clone()));
        }
    };
    if emit.contains(&EmitSection::Profile) {
        obj.insert("profile".into(), schema::profile_to_value(&profile));
    }
    let report = match verify_weak_spe(&profile, solved) {
        Ok(report) => report,
        Err(e) => {
            fail(obj, format!("verification failed: {e}"));
            return Ok((value, 3, args.out.clone()));
        }
    };
    obj.insert("report".into(), schema::report_to_value(&report));
    let outcome = outcome_from(&profile, &profile.initial_configuration());
    let outcome_payoff = solved.payoff_of(&outcome);
    obj.insert("outcome_payoff".into(), json!(outcome_payoff.to_string()));
    let code = if report.is_weak_spe && outcome_payoff == payoff {
        0
    } else {
        if report.is_weak_spe {
            fail(
                obj,
                format!("outcome payoff {outcome_payoff} differs from decided payoff {payoff}"),
            );
        } else {
            fail(obj, "profile failed the deviation check".into());
        }
        3
    };
    Ok((value, code, args.out.clone()))
}

fn cmd_verify(args: &VerifyArgs) -> CmdResult {
    let (game, _) = load_game(&args.game)?;
    let text = fs::read_to_string(&args.profile)
        .map_err(|e| CliError(format!("cannot read {}: {e}", args.profile.display())))?;
    let value: Value = serde_json::from_str(&text).map_err(|e| CliError(e.to_string()))?;
    let profile = schema::profile_from_value(&value, &game)?;
    let report = verify_weak_spe(&profile, &game)?;
    let code = if report.is_weak_spe { 0 } else { 1 };
    Ok((schema::report_to_value(&report), code, args.out.clone()))
}

fn cmd_generate_qbf(args: &GenerateQbfArgs) -> CmdResult {
    let text = fs::read_to_string(&args.formula)
        .map_err(|e| CliError(format!("cannot read {}: {e}", args.formula.display())))?;
    let formula = parse_qdimacs(&text)?;
    let variant = match args.variant {
        VariantArg::Reach => QbfVariant::Reach,
        VariantArg::Safety => QbfVariant::Safety,
    };
    let qbf = qbf_to_game(&formula, variant);
    fs::write(&args.out, schema::game_to_json_string(&qbf.game))
        .map_err(|e| CliError(format!("cannot write {}: {e}", args.out.display())))?;
    let constraint_path = sidecar_path(&args.out);
    let mut constraint = serde_json::to_string_pretty(&json!({
        "lower": qbf.lower.to_string(),
        "upper": qbf.upper.to_string(),
    }))
    .expect("serializable constraint");
    constraint.push('\n');
    fs::write(&constraint_path, constraint)
        .map_err(|e| CliError(format!("cannot write {}: {e}", constraint_path.display())))?;
    let summary = json!({
        "game": args.out.display().to_string(),
        "constraint": constraint_path.display().to_string(),
        "vertices": qbf.game.num_vertices(),
        "players": qbf.game.num_players(),
    });
    Ok((summary, 0, None))
}

fn sidecar_path(out: &Path) -> PathBuf {
    let mut name = out
        .file_name()
        .map(|n| n.to_os_string())
        .unwrap_or_default();
    name.push(".constraint.json");
    out.with_file_name(name)
}

fn cmd_generate_random(args: &GenerateRandomArgs) -> CmdResult {
    if args.vertices == 0 || args.players == 0 {
        return Err(CliError("vertices and players must be positive".into()));
    }
    if !(args.density > 0.0 && args.density <= 1.0) {
        return Err(CliError("density must lie in (0, 1]".into()));
    }
    let game = random_game(&RandomGameParams {
        num_vertices: args.vertices,
        num_players: args.players,
        objective_class: args.objective,
        edge_density: args.density,
        seed: args.seed,
    });
    fs::write(&args.out, schema::game_to_json_string(&game))
        .map_err(|e| CliError(format!("cannot write {}: {e}", args.out.display())))?;
    let summary = json!({
        "game": args.out.display().to_string(),
        "vertices": game.num_vertices(),
        "players": game.num_players(),
        "seed": args.seed,
    });
    Ok((summary, 0, None))
}
