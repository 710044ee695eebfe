use clap::{Args, Parser, Subcommand, ValueEnum};
use fennec::clearing::{cds_clear_extreme, Extreme, DEFAULT_CDS_ROUNDS};
use fennec::fixtures::{self, verify_fixture, Fixture};
use fennec::game::{analyze, AnalyzeOptions, Stability, UtilityMode, DEFAULT_PROFILE_CAP};
use fennec::model::parse_network;
use fennec::report;
use fennec::strategy::DEFAULT_STRATEGY_CAP;
use fennec::{Error, FinancialNetwork, StrategyProfile};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

const EXIT_INPUT: u8 = 1;
const EXIT_NONCONVERGENT: u8 = 2;
const EXIT_CAP: u8 = 3;

#[derive(Parser)]
#[command(name = "fennec", version, about = "Exact clearing and payment games in financial networks")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Compute clearing payments for one strategy profile.
    Clear(ClearArgs),
    /// Enumerate all profiles and report equilibria and welfare ratios.
    Analyze(AnalyzeArgs),
    /// List, emit or verify the built-in instances.
    #[command(subcommand)]
    Fixture(FixtureCommand),
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Json,
    Csv,
    Table,
}

#[derive(Clone, Copy, ValueEnum)]
enum Direction {
    Maximal,
    Minimal,
}

#[derive(Args)]
struct ClearArgs {
    #[arg(long)]
    network: PathBuf,
    /// Profile JSON file, inline JSON, or `proportional`.
    #[arg(long, default_value = "proportional")]
    profile: String,
    #[arg(long, value_enum, default_value = "maximal")]
    direction: Direction,
    #[arg(long, value_enum, default_value = "json")]
    output: Format,
    /// Cap on recovery-rate rounds for networks with CDS contracts.
    #[arg(long, default_value_t = DEFAULT_CDS_ROUNDS)]
    cds_rounds: usize,
}

#[derive(Args)]
struct AnalyzeArgs {
    #[arg(long)]
    network: PathBuf,
    /// `assets` or `equity`.
    #[arg(long, default_value = "assets")]
    utility: UtilityMode,
    /// Also test stability against coalitions: `strong` or `super-strong`.
    #[arg(long)]
    check: Option<Stability>,
    /// Largest coalition size considered by `--check` (default: all firms).
    #[arg(long)]
    coalition_max: Option<usize>,
    #[arg(long)]
    jobs: Option<usize>,
    #[arg(long, value_enum, default_value = "json")]
    output: Format,
    /// Cap on the number of strategy profiles.
    #[arg(long, env = "FENNEC_MAX_PROFILES", default_value_t = DEFAULT_PROFILE_CAP)]
    max_profiles: u128,
    /// Cap on the number of strategies per firm.
    #[arg(long, default_value_t = DEFAULT_STRATEGY_CAP)]
    max_strategies: u128,
}

#[derive(Subcommand)]
enum FixtureCommand {
    /// Print the available fixture names.
    List,
    /// Write the network JSON and its expectations sidecar.
    Emit(FixtureArgs),
    /// Run the solver against every expectation of a fixture.
    Verify(FixtureArgs),
}

#[derive(Args)]
struct FixtureArgs {
    #[arg(long)]
    name: String,
    /// Parameter override such as `M=100` or `beta=1/3`; repeatable.
    #[arg(long = "param")]
    params: Vec<String>,
    /// Directory for emitted files.
    #[arg(long, default_value = ".")]
    out_dir: PathBuf,
}

fn exit_code(e: &Error) -> u8 {
    match e {
        Error::NonConvergent(_) | Error::NonConvergentProfile(_) | Error::NonFiniteRegime(_) => EXIT_NONCONVERGENT,
        Error::EnumerationCapExceeded { .. } | Error::StrategySpaceTooLarge { .. } => EXIT_CAP,
        _ => EXIT_INPUT,
    }
}

struct Failure {
    code: u8,
    message: String,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure {
            code: exit_code(&e),
            message: e.to_string(),
        }
    }
}

fn input_error(message: String) -> Failure {
    Failure {
        code: EXIT_INPUT,
        message,
    }
}

fn read(path: &Path) -> Result<String, Failure> {
    std::fs::read_to_string(path).map_err(|e| input_error(format!("cannot read {}: {e}", path.display())))
}

fn load_network(path: &Path) -> Result<FinancialNetwork, Failure> {
    Ok(parse_network(&read(path)?)?)
}

fn load_profile(net: &FinancialNetwork, arg: &str) -> Result<StrategyProfile, Failure> {
    let text = if arg.trim() == "proportional" || arg.trim_start().starts_with('{') {
        arg.to_string()
    } else {
        read(Path::new(arg))?
    };
    let p = StrategyProfile::parse(net, &text)?;
    p.check(net)?;
    Ok(p)
}

fn pretty(v: &serde_json::Value) -> String {
    serde_json::to_string_pretty(v).expect("serializable") + "\n"
}

fn cmd_clear(args: ClearArgs) -> Result<u8, Failure> {
    let net = load_network(&args.network)?;
    let profile = load_profile(&net, &args.profile)?;
    let extreme = match args.direction {
        Direction::Maximal => Extreme::Maximal,
        Direction::Minimal => Extreme::Minimal,
    };
    if args.cds_rounds == 0 {
        return Err(input_error("--cds-rounds must be positive".into()));
    }
    let res = cds_clear_extreme(&net, &profile, extreme, args.cds_rounds)?;
    let text = match args.output {
        Format::Json => pretty(&report::clearing_json(&net, &profile, &res)),
        Format::Csv => report::clearing_csv(&net, &res),
        Format::Table => report::clearing_table(&net, &profile, &res),
    };
    print!("{text}");
    if res.converged {
        Ok(0)
    } else {
        eprintln!("recovery rates did not converge after {} rounds", res.outer_rounds);
        Ok(EXIT_NONCONVERGENT)
    }
}

fn cmd_analyze(args: AnalyzeArgs) -> Result<u8, Failure> {
    let net = load_network(&args.network)?;
    if args.max_profiles == 0 || args.max_strategies == 0 || args.coalition_max == Some(0) || args.jobs == Some(0) {
        return Err(input_error("caps, --coalition-max and --jobs must be positive".into()));
    }
    if args.coalition_max.is_some() && args.check.is_none() {
        return Err(input_error("--coalition-max needs --check".into()));
    }
    let options = AnalyzeOptions {
        profile_cap: args.max_profiles,
        strategy_cap: args.max_strategies,
        jobs: args.jobs,
        coalition: args.check.map(|s| (s, args.coalition_max.unwrap_or(net.n()))),
    };
    let rep = analyze(&net, args.utility, &options)?;
    let text = match args.output {
        Format::Json => pretty(&report::report_json(&net, &rep)),
        Format::Csv => report::report_csv(&net, &rep),
        Format::Table => report::report_table(&net, &rep),
    };
    print!("{text}");
    Ok(0)
}

fn fixture_from(args: &FixtureArgs) -> Result<Fixture, Failure> {
    let params = fixtures::parse_params(args.params.iter().map(String::as_str))?;
    Ok(fixtures::make_fixture(&args.name, &params)?)
}

fn write_file(path: &Path, contents: &str) -> Result<(), Failure> {
    std::fs::write(path, contents).map_err(|e| input_error(format!("cannot write {}: {e}", path.display())))
}

fn cmd_fixture(cmd: FixtureCommand) -> Result<u8, Failure> {
    match cmd {
        FixtureCommand::List => {
            for name in fixtures::NAMES {
                let fx = fixtures::default_fixture(name)?;
                println!("{name}\t{}", fx.summary);
            }
            Ok(0)
        }
        FixtureCommand::Emit(args) => {
            let fx = fixture_from(&args)?;
            std::fs::create_dir_all(&args.out_dir)
                .map_err(|e| input_error(format!("cannot create {}: {e}", args.out_dir.display())))?;
            let net_path = args.out_dir.join(format!("{}.json", fx.name));
            let exp_path = args.out_dir.join(format!("{}.expected.json", fx.name));
            write_file(&net_path, &(fx.network.to_raw().to_json() + "\n"))?;
            write_file(&exp_path, &pretty(&fx.expectations_json()))?;
            println!("{}", net_path.display());
            println!("{}", exp_path.display());
            Ok(0)
        }
        FixtureCommand::Verify(args) => {
            let fx = fixture_from(&args)?;
            let outcomes = verify_fixture(&fx)?;
            let passed = outcomes.iter().filter(|o| o.pass).count();
            for o in &outcomes {
                let tag = if o.pass { "PASS" } else { "FAIL" };
                println!("{tag} {}: {}", o.what, o.detail);
            }
            println!("{passed}/{} expectations pass", outcomes.len());
            Ok(if passed == outcomes.len() { 0 } else { EXIT_INPUT })
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Clear(a) => cmd_clear(a),
        Command::Analyze(a) => cmd_analyze(a),
        Command::Fixture(c) => cmd_fixture(c),
    };
    match result {
        Ok(code) => ExitCode::from(code),
        Err(f) => {
            eprintln!("error: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}
