use std::fs;
use std::path::Path;
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use frogsel::harness::{
    apply_ini, export_reduced, knn_cv_accuracy, parse_seeds, run, run_algorithm, wins_table, Algorithm, RunSpec,
};
use frogsel::oracle::exhaustive;
use frogsel::stats::{friedman, friedman_from_ranks, li_posthoc, snap_average_ranks, ScoreMatrix, ScoreMissingPolicy};
use frogsel::{
    crisp_regions, frdd as evaluate_frdd, load_table, ColumnRef, DecisionTable, FeatureMask, LoadOptions,
    ReductReport, TableFormat,
};
use serde_json::json;

use crate::{
    BenchArgs, ExportFormat, FrddArgs, OracleArgs, OutputFormat, ReduceArgs, SelectArgs, StatsArgs, Switch, TableArgs,
};

fn load_options(args: &TableArgs) -> LoadOptions {
    let mut o = LoadOptions::default();
    if let Some(c) = &args.class {
        o.class = Some(c.parse::<ColumnRef>().expect("infallible"));
    }
    if let Some(s) = args.sigma {
        o.sigma = s.into();
    }
    if let Some(n) = args.normalize {
        o.normalize = matches!(n, Switch::On);
    }
    o
}

fn load(path: &Path, args: &TableArgs) -> Result<DecisionTable> {
    load_table(path, TableFormat::from_path(path), &load_options(args))
        .with_context(|| format!("loading {}", path.display()))
}

fn apply_table_args(spec: &mut RunSpec, args: &TableArgs) {
    if let Some(c) = &args.class {
        spec.class = Some(c.clone());
    }
    if let Some(s) = args.sigma {
        spec.sigma = s.into();
    }
    if let Some(n) = args.normalize {
        spec.normalize = matches!(n, Switch::On);
    }
}

fn spec_from_config(config: Option<&Path>) -> Result<RunSpec> {
    let mut spec = RunSpec::default();
    if let Some(path) = config {
        let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
        apply_ini(&mut spec, &text).with_context(|| format!("in {}", path.display()))?;
    }
    Ok(spec)
}

/// A mask from either a bit string or a list of feature names and indices.
fn resolve_mask(table: &DecisionTable, mask: Option<&str>, features: &[String]) -> Result<FeatureMask> {
    let l = table.feature_count();
    if let Some(bits) = mask {
        let m: FeatureMask = bits.parse()?;
        if m.len() != l {
            bail!("mask has {} bits but the table has {l} features", m.len());
        }
        return Ok(m);
    }
    if features.is_empty() {
        bail!("give a subset with --mask or --features");
    }
    let names: Vec<&str> = table.features().iter().map(|f| f.name()).collect();
    let mut m = FeatureMask::empty(l);
    for f in features {
        let i = match names.iter().position(|n| n == f) {
            Some(i) => i,
            None => match f.parse::<usize>() {
                Ok(i) if i < l => i,
                _ => bail!("no feature `{f}`"),
            },
        };
        m.set(i, true);
    }
    Ok(m)
}

fn feature_names(table: &DecisionTable, mask: &FeatureMask) -> Vec<String> {
    mask.ones().map(|i| table.feature(i).name().to_string()).collect()
}

fn print_json(value: &serde_json::Value) {
    println!("{}", serde_json::to_string_pretty(value).expect("value serializes"));
}

pub fn select(args: SelectArgs) -> Result<ExitCode> {
    let algorithm: Algorithm = args.algorithm.parse()?;
    let mut spec = spec_from_config(args.config.as_deref())?;
    apply_table_args(&mut spec, &args.table);
    if let Some(d) = args.distance {
        spec.settings.bsfla.distance = d.into();
    }
    spec.settings.validate()?;
    let table = load(&args.dataset, &args.table)?;
    let report = run_algorithm(&table, algorithm, &spec.settings, args.seed)?;
    let proxy = match (args.proxy_folds, report.reducts.first()) {
        (Some(folds), Some(mask)) => Some(knn_cv_accuracy(&table, mask, folds, args.seed)?),
        _ => None,
    };
    match args.format {
        OutputFormat::Json => {
            let mut v = serde_json::to_value(&report)?;
            v["table"] = serde_json::to_value(table.summary())?;
            v["reduct_features"] = json!(report.reducts.iter().map(|m| feature_names(&table, m)).collect::<Vec<_>>());
            if let Some(a) = proxy {
                v["proxy_accuracy"] = json!(a);
            }
            print_json(&v);
        }
        OutputFormat::Text => print_report(&table, &report, proxy),
    }
    Ok(ExitCode::SUCCESS)
}

fn print_report(table: &DecisionTable, report: &ReductReport, proxy: Option<f64>) {
    let s = table.summary();
    println!(
        "{}: {} objects, {} features, {} classes",
        s.name, s.objects, s.features, s.classes
    );
    println!("algorithm      {}", report.algorithm);
    println!("dependency     {:.6}", report.best_fitness);
    println!("features       {}", report.best_cardinality);
    println!("evaluations    {}", report.evaluations);
    println!("stopped        {}", report.stop_reason);
    println!("wall time      {:.1} ms", report.wall_time_ms);
    if let Some(a) = proxy {
        println!("1-NN accuracy  {a:.4}");
    }
    println!("reducts        {}", report.reducts.len());
    for m in &report.reducts {
        println!("  {m}  {}", feature_names(table, m).join(", "));
    }
}

pub fn frdd(args: FrddArgs) -> Result<ExitCode> {
    let table = load(&args.dataset, &args.table)?;
    let mask = resolve_mask(&table, args.mask.as_deref(), &args.features)?;
    let value = evaluate_frdd(&table, &mask)?;
    let crisp = if args.crisp { Some(crisp_regions(&table, &mask)?) } else { None };
    match args.format {
        OutputFormat::Json => {
            let mut v = json!({
                "mask": mask,
                "features": feature_names(&table, &mask),
                "gamma_prime": value.gamma_prime,
                "per_object_pos": value.per_object_pos,
                "table": table.summary(),
            });
            if let Some(c) = &crisp {
                v["crisp"] = serde_json::to_value(c)?;
            }
            print_json(&v);
        }
        OutputFormat::Text => {
            println!("{mask}  {}", feature_names(&table, &mask).join(", "));
            println!("dependency {:.12}", value.gamma_prime);
            if let Some(c) = &crisp {
                println!(
                    "crisp gamma {:.12} (pos {}, bnd {}, neg {})",
                    c.gamma,
                    c.pos.len(),
                    c.bnd.len(),
                    c.neg.len()
                );
            }
        }
    }
    Ok(ExitCode::SUCCESS)
}

pub fn reduce(args: ReduceArgs) -> Result<ExitCode> {
    let table = load(&args.dataset, &args.table)?;
    let mask = match &args.report {
        Some(path) => {
            let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
            let report: ReductReport = serde_json::from_str(&text).context("parsing report")?;
            match report.reducts.into_iter().next() {
                Some(m) if m.len() == table.feature_count() => m,
                Some(_) => bail!("report mask length does not match the table"),
                None => bail!("report has no reducts"),
            }
        }
        None => resolve_mask(&table, args.mask.as_deref(), &args.features)?,
    };
    let format = match args.format {
        Some(ExportFormat::Csv) => TableFormat::Csv,
        Some(ExportFormat::Arff) => TableFormat::Arff,
        None => TableFormat::from_path(&args.output),
    };
    export_reduced(&table, &mask, &args.output, format)?;
    eprintln!(
        "wrote {} features x {} objects to {}",
        mask.count_ones(),
        table.objects(),
        args.output.display()
    );
    Ok(ExitCode::SUCCESS)
}

pub fn bench(args: BenchArgs) -> Result<ExitCode> {
    let mut spec = spec_from_config(args.config.as_deref())?;
    if !args.datasets.is_empty() {
        spec.datasets = args.datasets.clone();
    }
    if !args.algorithms.is_empty() {
        spec.algorithms = args.algorithms.iter().map(|a| a.parse()).collect::<frogsel::Result<_>>()?;
    }
    if let Some(s) = &args.seeds {
        spec.seeds = parse_seeds(s)?;
    }
    if let Some(j) = args.jobs {
        spec.jobs = j;
    }
    if let Some(o) = &args.output {
        spec.output = Some(o.clone());
    }
    if let Some(f) = args.proxy_folds {
        spec.proxy_folds = Some(f);
    }
    if let Some(d) = args.distance {
        spec.settings.bsfla.distance = d.into();
    }
    apply_table_args(&mut spec, &args.table);

    let report = run(&spec)?;
    if let Some(dir) = &spec.output {
        report.write_to(dir)?;
        eprintln!("wrote {} cells to {}", report.cells.len(), dir.display());
    }
    print!("{}", report.aggregate_csv());
    if let Some(metric) = args.wins {
        println!();
        println!("algorithm,wins");
        for w in wins_table(&report, metric.into())? {
            println!("{},{}", w.algorithm, w.wins);
        }
    }
    let failed = report.failures();
    if failed > 0 {
        eprintln!("{failed} of {} cells failed", report.cells.len());
        return Ok(ExitCode::from(2));
    }
    Ok(ExitCode::SUCCESS)
}

pub fn stats(args: StatsArgs) -> Result<ExitCode> {
    let (result, names) = match &args.scores {
        Some(path) => {
            let matrix = ScoreMatrix::from_csv(path)?;
            let policy: ScoreMissingPolicy = args.missing.parse()?;
            let r = friedman(&matrix, policy)?;
            let names = matrix.algorithms.clone();
            (r, names)
        }
        None => {
            let Some(n) = args.datasets else {
                bail!("give a score file or --ranks with --datasets");
            };
            let ranks = if args.snap { snap_average_ranks(&args.ranks, n) } else { args.ranks.clone() };
            let mut r = friedman_from_ranks(&ranks, n)?;
            if !args.names.is_empty() {
                if args.names.len() != ranks.len() {
                    bail!("{} names for {} ranks", args.names.len(), ranks.len());
                }
                r.algorithms = args.names.clone();
            }
            let names = r.algorithms.clone();
            (r, names)
        }
    };
    let control = match &args.control {
        Some(name) => names
            .iter()
            .position(|n| n == name)
            .with_context(|| format!("no algorithm named `{name}`"))?,
        None => (0..result.k)
            .min_by(|&a, &b| result.average_ranks[a].total_cmp(&result.average_ranks[b]))
            .expect("at least two algorithms"),
    };
    let li = li_posthoc(&result.average_ranks, &names, result.n, control, args.alpha)?;
    match args.format {
        OutputFormat::Json => print_json(&json!({ "friedman": result, "li": li })),
        OutputFormat::Text => {
            print!("{result}");
            println!();
            println!("control: {}", names[control]);
            print!("{li}");
        }
    }
    Ok(ExitCode::SUCCESS)
}

pub fn oracle(args: OracleArgs) -> Result<ExitCode> {
    let table = load(&args.dataset, &args.table)?;
    let result = exhaustive(&table)?;
    match args.format {
        OutputFormat::Json => print_json(&serde_json::to_value(&result)?),
        OutputFormat::Text => {
            println!(
                "optimum: dependency {:.12} with {} features ({} subsets)",
                result.best_fitness,
                result.best_cardinality,
                result.optimal.len()
            );
            println!("{:>5} {:>16} {:>8}", "size", "dependency", "subsets");
            for p in &result.by_cardinality {
                println!("{:>5} {:>16.12} {:>8}", p.cardinality, p.fitness, p.count);
            }
        }
    }
    Ok(ExitCode::SUCCESS)
}
