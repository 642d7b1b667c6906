//! `comean`: analyze two-sample data with common-mean estimators, run
//! coverage simulations, and dump the builtin datasets.

use std::fs::File;
use std::io::{self, BufReader, Read};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde_json::json;

use comean::{
    bootstrap_variance, clt_variance, confidence_interval, coverage_experiment, datasets,
    delete_d_jackknife, estimate_common_mean, jackknife_paired, jackknife_unequal,
    CltConvention, EstimatorSpec, Grouping, Norming, Parallelism, SimulationModel, TildeRule,
    TwoSampleData, VarianceMethod, ZStyle,
};

#[derive(Parser)]
#[command(name = "comean", version, about)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Estimate the common mean and report per-method sd / confidence interval rows
    Analyze(AnalyzeArgs),
    /// Monte Carlo coverage of nominal-95% intervals
    Coverage(CoverageArgs),
    /// List or dump the builtin datasets
    Datasets {
        #[command(subcommand)]
        command: DatasetsCommand,
    },
}

#[derive(Args)]
struct AnalyzeArgs {
    /// CSV path ("-" for stdin) with header `sample,value`; or two
    /// comma-separated paths of one-value-per-line files
    #[arg(long, conflicts_with = "builtin")]
    data: Option<String>,
    /// Builtin dataset name (see `datasets list`)
    #[arg(long)]
    builtin: Option<String>,
    /// gd | nair | elfessi3 | fixed:<gamma> | kubokawa:<a,b,c> | chang:<base>
    #[arg(long, default_value = "gd")]
    estimator: String,
    /// jackknife | clt | bootstrap:<B> | delete-d:<d> (repeatable)
    #[arg(long = "method")]
    methods: Vec<String>,
    #[arg(long, default_value_t = 0.95)]
    level: f64,
    /// exact | paper (paper pins z = 1.96 at the 95% level)
    #[arg(long, default_value = "exact")]
    z_style: String,
    /// unbiased | plugin pseudo-value variance divisor
    #[arg(long, default_value = "unbiased")]
    norming: String,
    /// RNG seed for bootstrap / sampled delete-d (overrides COMEAN_SEED)
    #[arg(long)]
    seed: Option<u64>,
    /// tsv | json
    #[arg(long, default_value = "tsv")]
    format: String,
}

#[derive(Args)]
struct CoverageArgs {
    /// Simulation model 1..5
    #[arg(long)]
    model: u8,
    /// Comma-separated per-sample sizes
    #[arg(long, default_value = "25,50,75")]
    n: String,
    #[arg(long, default_value_t = 1000)]
    reps: usize,
    /// Comma-separated bootstrap replicate counts (one output column each)
    #[arg(long, default_value = "")]
    bootstrap_b: String,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long, default_value_t = 1.0)]
    sigma1: f64,
    #[arg(long, default_value_t = 2.0)]
    sigma2: f64,
    /// Worker threads (default: all cores)
    #[arg(long)]
    workers: Option<usize>,
}

#[derive(Subcommand)]
enum DatasetsCommand {
    /// List builtin datasets
    List,
    /// Print a dataset in the CSV form `analyze --data` reads
    Show {
        name: String,
        #[arg(long, default_value = "csv")]
        format: String,
    },
}

/// CLI failure with its documented exit code: 2 usage, 3 data, 4 estimator.
struct Failure {
    code: u8,
    message: String,
}

fn usage(message: impl Into<String>) -> Failure {
    Failure { code: 2, message: message.into() }
}

fn data_error(message: impl Into<String>) -> Failure {
    Failure { code: 3, message: message.into() }
}

fn estimator_error(message: impl Into<String>) -> Failure {
    Failure { code: 4, message: message.into() }
}

fn from_library(err: comean::Error) -> Failure {
    use comean::Error::*;
    match err {
        EmptySample | NonFiniteValue { .. } | UnknownDataset(_) | Parse { .. }
        | MissingSample(_) | Io(_) => data_error(err.to_string()),
        InvalidModel(_) | NonPositiveSigma(_) => usage(err.to_string()),
        _ => estimator_error(err.to_string()),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Analyze(args) => run_analyze(&args),
        Command::Coverage(args) => run_coverage(&args),
        Command::Datasets { command } => run_datasets(&command),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("error: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}

fn default_seed(flag: Option<u64>) -> u64 {
    flag.or_else(|| std::env::var("COMEAN_SEED").ok().and_then(|s| s.parse().ok()))
        .unwrap_or(0)
}

fn parse_estimator(s: &str) -> Result<EstimatorSpec, Failure> {
    match s {
        "gd" => Ok(EstimatorSpec::GraybillDeal),
        "nair" => Ok(EstimatorSpec::ElfessiUnbalanced),
        "elfessi3" => Ok(EstimatorSpec::ElfessiBalanced),
        _ => {
            if let Some(rest) = s.strip_prefix("fixed:") {
                let gamma: f64 = rest
                    .parse()
                    .map_err(|_| usage(format!("invalid fixed weight '{rest}'")))?;
                if !(0.0..=1.0).contains(&gamma) {
                    return Err(usage(format!("fixed weight {gamma} outside [0, 1]")));
                }
                Ok(EstimatorSpec::FixedWeight(gamma))
            } else if let Some(rest) = s.strip_prefix("kubokawa:") {
                let parts: Vec<&str> = rest.split(',').collect();
                if parts.len() != 3 {
                    return Err(usage("kubokawa needs three parameters a,b,c"));
                }
                let mut vals = [0.0f64; 3];
                for (v, p) in vals.iter_mut().zip(&parts) {
                    *v = p
                        .parse()
                        .map_err(|_| usage(format!("invalid kubokawa parameter '{p}'")))?;
                }
                Ok(EstimatorSpec::Kubokawa {
                    a: vals[0],
                    b: vals[1],
                    c: vals[2],
                    psi: comean::PsiFn::one(),
                })
            } else if let Some(rest) = s.strip_prefix("chang:") {
                let base = parse_estimator(rest)?;
                Ok(EstimatorSpec::ChangPlus { base: Box::new(base), tilde_rule: TildeRule::Floor })
            } else {
                Err(usage(format!("unknown estimator '{s}'")))
            }
        }
    }
}

enum MethodSpec {
    Jackknife,
    Clt,
    Bootstrap(usize),
    DeleteD(usize),
}

fn parse_method(s: &str) -> Result<MethodSpec, Failure> {
    match s {
        "jackknife" => Ok(MethodSpec::Jackknife),
        "clt" => Ok(MethodSpec::Clt),
        _ => {
            if let Some(rest) = s.strip_prefix("bootstrap:") {
                let b = rest.parse().map_err(|_| usage(format!("invalid replicate count '{rest}'")))?;
                Ok(MethodSpec::Bootstrap(b))
            } else if let Some(rest) = s.strip_prefix("delete-d:") {
                let d = rest.parse().map_err(|_| usage(format!("invalid deletion size '{rest}'")))?;
                Ok(MethodSpec::DeleteD(d))
            } else {
                Err(usage(format!("unknown method '{s}'")))
            }
        }
    }
}

fn parse_norming(s: &str) -> Result<Norming, Failure> {
    match s {
        "unbiased" => Ok(Norming::Unbiased),
        "plugin" => Ok(Norming::Plugin),
        _ => Err(usage(format!("unknown norming '{s}'"))),
    }
}

fn parse_z_style(s: &str) -> Result<ZStyle, Failure> {
    match s {
        "exact" => Ok(ZStyle::Exact),
        "paper" => Ok(ZStyle::Paper),
        _ => Err(usage(format!("unknown z-style '{s}'"))),
    }
}

fn load_data(args: &AnalyzeArgs) -> Result<(String, TwoSampleData), Failure> {
    match (&args.data, &args.builtin) {
        (Some(path), None) => {
            let data = if let Some((p1, p2)) = path.split_once(',') {
                let v1 = read_values(p1)?;
                let v2 = read_values(p2)?;
                TwoSampleData::from_values(v1, v2).map_err(from_library)?
            } else if path == "-" {
                let mut buf = String::new();
                io::stdin()
                    .read_to_string(&mut buf)
                    .map_err(|e| data_error(e.to_string()))?;
                datasets::read_two_column_csv(buf.as_bytes()).map_err(from_library)?
            } else {
                let file = File::open(path).map_err(|e| data_error(format!("{path}: {e}")))?;
                datasets::read_two_column_csv(BufReader::new(file)).map_err(from_library)?
            };
            Ok((path.clone(), data))
        }
        (None, Some(name)) => {
            let ds = datasets::load_builtin(name).map_err(from_library)?;
            Ok((ds.name.to_string(), ds.data))
        }
        _ => Err(usage("exactly one of --data or --builtin is required")),
    }
}

fn read_values(path: &str) -> Result<Vec<f64>, Failure> {
    let file = File::open(path).map_err(|e| data_error(format!("{path}: {e}")))?;
    datasets::read_value_lines(BufReader::new(file)).map_err(from_library)
}

struct Row {
    method: String,
    sd: f64,
    lower: f64,
    upper: f64,
}

fn run_analyze(args: &AnalyzeArgs) -> Result<(), Failure> {
    let (dataset_name, data) = load_data(args)?;
    let spec = parse_estimator(&args.estimator)?;
    let norming = parse_norming(&args.norming)?;
    let z_style = parse_z_style(&args.z_style)?;
    if !(0.0 < args.level && args.level < 1.0) {
        return Err(usage(format!("level {} outside (0, 1)", args.level)));
    }
    let method_names: Vec<String> = if args.methods.is_empty() {
        vec!["clt".into(), "jackknife".into()]
    } else {
        args.methods.clone()
    };

    let estimate = estimate_common_mean(&data, &spec).map_err(from_library)?;
    let seed = default_seed(args.seed);
    let mut used_seed = false;

    let mut rows = Vec::new();
    for name in &method_names {
        let sd = match parse_method(name)? {
            MethodSpec::Jackknife => {
                // paired deletion on balanced designs, pooled pseudo-value
                // variance otherwise (the conventions behind the published
                // data analyses)
                if data.n1() == data.n2() {
                    jackknife_paired(&spec, &data, norming, Parallelism::Rayon)
                        .map_err(from_library)?
                        .sd
                } else {
                    jackknife_unequal(&spec, &data, norming, Grouping::Pooled, Parallelism::Rayon)
                        .map_err(from_library)?
                        .sd
                }
            }
            MethodSpec::Clt => {
                clt_variance(&data, &spec, CltConvention::Unbiased).map_err(from_library)?.sd
            }
            MethodSpec::Bootstrap(b) => {
                used_seed = true;
                bootstrap_variance(&spec, &data, b, seed, Parallelism::Rayon)
                    .map_err(from_library)?
                    .sd
            }
            MethodSpec::DeleteD(d) => {
                used_seed = true;
                let mut rng = ChaCha8Rng::seed_from_u64(seed);
                delete_d_jackknife(&spec, &data, d, 100_000, &mut rng)
                    .map_err(from_library)?
                    .sd
            }
        };
        let ci = confidence_interval(estimate.value, sd, args.level, z_style)
            .map_err(from_library)?;
        rows.push(Row { method: name.clone(), sd, lower: ci.lower, upper: ci.upper });
    }

    let version = env!("CARGO_PKG_VERSION");
    match args.format.as_str() {
        "tsv" => {
            println!("# dataset: {dataset_name} (n1={}, n2={})", data.n1(), data.n2());
            println!("# estimator: {}", args.estimator);
            println!("# estimate: {}", estimate.value);
            println!("# level: {}", args.level);
            println!("# version: {version}");
            if used_seed {
                println!("# seed: {seed}");
            }
            println!("method\tsd\tci_lower\tci_upper\twidth");
            for row in &rows {
                println!(
                    "{}\t{}\t{}\t{}\t{}",
                    row.method,
                    row.sd,
                    row.lower,
                    row.upper,
                    row.upper - row.lower
                );
            }
        }
        "json" => {
            let report = json!({
                "dataset": {
                    "name": dataset_name,
                    "n1": data.n1(),
                    "n2": data.n2(),
                },
                "estimator": args.estimator,
                "estimate": estimate.value,
                "level": args.level,
                "version": version,
                "seed": if used_seed { Some(seed) } else { None },
                "rows": rows.iter().map(|row| json!({
                    "method": row.method,
                    "sd": row.sd,
                    "ci_lower": row.lower,
                    "ci_upper": row.upper,
                    "width": row.upper - row.lower,
                })).collect::<Vec<_>>(),
            });
            println!("{report}");
        }
        other => return Err(usage(format!("unknown format '{other}'"))),
    }
    Ok(())
}

fn run_coverage(args: &CoverageArgs) -> Result<(), Failure> {
    let model = SimulationModel::with_params(args.model, 10.0, args.sigma1, args.sigma2)
        .map_err(from_library)?;
    let sizes: Vec<usize> = args
        .n
        .split(',')
        .map(|s| s.trim().parse().map_err(|_| usage(format!("invalid sample size '{s}'"))))
        .collect::<Result<_, _>>()?;
    let b_values: Vec<usize> = args
        .bootstrap_b
        .split(',')
        .filter(|s| !s.trim().is_empty())
        .map(|s| s.trim().parse().map_err(|_| usage(format!("invalid replicate count '{s}'"))))
        .collect::<Result<_, _>>()?;
    if args.reps == 0 {
        return Err(usage("--reps must be positive"));
    }
    if let Some(workers) = args.workers {
        if workers == 0 {
            return Err(usage("--workers must be positive"));
        }
        // ignore the error if a global pool already exists (e.g. in tests)
        let _ = rayon::ThreadPoolBuilder::new().num_threads(workers).build_global();
    }
    let seed = default_seed(args.seed);

    let mut methods = vec![VarianceMethod::JackknifePaired(Norming::Unbiased)];
    for &b in &b_values {
        methods.push(VarianceMethod::Bootstrap { b, seed });
    }

    let mut header = String::from("model\tn\treps\tseed\tjackknife");
    for &b in &b_values {
        header.push_str(&format!("\tb{b}"));
    }
    println!("{header}");
    for &n in &sizes {
        let table = coverage_experiment(
            &model,
            n,
            args.reps,
            &methods,
            &EstimatorSpec::GraybillDeal,
            0.95,
            seed,
            Parallelism::Rayon,
        )
        .map_err(from_library)?;
        let mut line = format!("{}\t{n}\t{}\t{seed}", args.model, args.reps);
        for result in &table.results {
            line.push_str(&format!("\t{}", result.coverage));
        }
        println!("{line}");
    }
    Ok(())
}

fn run_datasets(command: &DatasetsCommand) -> Result<(), Failure> {
    match command {
        DatasetsCommand::List => {
            println!("name\tn1\tn2\tdescription\tsource");
            for name in datasets::BUILTIN_NAMES {
                let ds = datasets::load_builtin(name).map_err(from_library)?;
                println!(
                    "{}\t{}\t{}\t{}\t{}",
                    ds.name,
                    ds.data.n1(),
                    ds.data.n2(),
                    ds.description,
                    ds.source
                );
            }
            let chip = datasets::chip_summary();
            println!(
                "chip\t{}\t{}\tchip width measurements (summary only)\tchip data",
                chip.n1, chip.n2
            );
            Ok(())
        }
        DatasetsCommand::Show { name, format } => {
            if format != "csv" {
                return Err(usage(format!("unknown format '{format}'")));
            }
            if name == "chip" {
                let chip = datasets::chip_summary();
                println!("# summary-only dataset: raw data unavailable");
                println!("sample\tn\tmean\tsd");
                println!("1\t{}\t{}\t{}", chip.n1, chip.mean1, chip.sd1);
                println!("2\t{}\t{}\t{}", chip.n2, chip.mean2, chip.sd2);
                return Ok(());
            }
            let ds = datasets::load_builtin(name).map_err(from_library)?;
            print!("{}", datasets::write_two_column_csv(&ds.data));
            Ok(())
        }
    }
}
