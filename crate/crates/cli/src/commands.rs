use std::fmt::Write as _;
use std::io::Write as _;
use std::path::Path;

use anyhow::{bail, Context, Result};
use effort_core::harness::{apply_bounds, compare_all, CompareConfig};
use effort_core::{
    load_csv, metrics, nasa_dataset, predict_all, run_experiment, split_fixed, Algorithm, Dataset,
    ExperimentConfig, ModelSpec, ParameterVector, SplitDataset,
};

use crate::output::{
    render_table, table_rows, to_json, trace_csv, write_file, CompareDocument, CompareEntry,
    ConfigEcho, FitDocument, ModelTable,
};
use crate::{CommonArgs, FitArgs, PredictArgs};

fn load(data: Option<&Path>) -> Result<Dataset> {
    match data {
        Some(p) => load_csv(p).with_context(|| format!("loading {}", p.display())),
        None => Ok(nasa_dataset()),
    }
}

fn prepare(args: &CommonArgs) -> Result<(SplitDataset, ConfigEcho)> {
    if let Some(jobs) = args.jobs {
        rayon::ThreadPoolBuilder::new()
            .num_threads(jobs.max(1))
            .build_global()
            .context("configuring worker threads")?;
    }
    let dataset = load(args.data.as_deref())?;
    let split = split_fixed(&dataset, args.train_count)?;
    std::fs::create_dir_all(&args.out)
        .with_context(|| format!("creating {}", args.out.display()))?;
    let echo = ConfigEcho {
        dataset: dataset.name().to_owned(),
        records: dataset.len(),
        train_ids: split.train.ids(),
        test_ids: split.test.ids(),
        runs: args.runs,
        master_seed: args.seed,
        bounds: args.bounds.clone(),
    };
    Ok((split, echo))
}

fn algorithm_titles() -> Vec<&'static str> {
    Algorithm::ALL.iter().map(|a| a.title()).collect()
}

pub fn fit(args: &FitArgs) -> Result<()> {
    let common = &args.common;
    let (split, echo) = prepare(common)?;
    let mut cfg = ExperimentConfig::new(args.model, args.optimizer, split, common.seed);
    cfg.runs = common.runs;
    cfg.optimizer.set_iterations(common.iters);
    cfg.optimizer.set_population(common.population);
    cfg.space = apply_bounds(cfg.space, &common.bounds)?;

    let report = run_experiment(&cfg)?;
    let rows = table_rows(&[Some((report.mean_train, report.mean_test))]);
    let title = format!(
        "{} / {} (mean of {} runs)",
        args.model.title(),
        args.optimizer.title(),
        report.per_run.len()
    );
    let table = render_table(&title, &[args.optimizer.title()], &rows);
    let trace = trace_csv(&["best"], &[Some(&report.mean_trace)]);

    let doc = FitDocument {
        command: "fit".into(),
        config: echo,
        optimizer: cfg.optimizer,
        space: cfg.space,
        report,
        table: rows,
    };

    let stem = format!("fit_{}_{}", args.model, args.optimizer);
    let out = &common.out;
    write_file(&out.join(format!("{stem}.json")), &to_json(&doc)?)?;
    write_file(&out.join(format!("{stem}_trace.csv")), &trace)?;
    write_file(&out.join(format!("{stem}_table.txt")), &table)?;
    let best = doc.report.best();
    emit(&format!(
        "{table}best run {}: training MAE {} with coefficients {:?}\n",
        best.run, best.objective, best.parameters
    ))
}

pub fn compare(args: &CommonArgs) -> Result<()> {
    let (split, echo) = prepare(args)?;
    let mut base = CompareConfig::new(split, args.seed);
    base.runs = args.runs;
    base.iterations = Some(args.iters);
    base.population = Some(args.population);
    base.bounds = args.bounds.clone();

    let cells: Vec<CompareEntry> = compare_all(&base)
        .into_iter()
        .map(|c| {
            let (report, error) = match c.report {
                Ok(r) => (Some(r), None),
                Err(e) => (None, Some(e.to_string())),
            };
            CompareEntry {
                model: c.model,
                algorithm: c.algorithm,
                report,
                error,
            }
        })
        .collect();

    let mut tables = Vec::new();
    let mut failures = Vec::new();
    let mut stdout = String::new();
    for model in ModelSpec::ALL {
        let row: Vec<&CompareEntry> = cells.iter().filter(|c| c.model == model).collect();
        for c in &row {
            if let Some(e) = &c.error {
                failures.push(format!("{}/{}: {e}", c.model, c.algorithm));
            }
        }
        let columns: Vec<_> = row
            .iter()
            .map(|c| c.report.as_ref().map(|r| (r.mean_train, r.mean_test)))
            .collect();
        let rows = table_rows(&columns);
        let text = render_table(model.title(), &algorithm_titles(), &rows);
        write_file(&args.out.join(format!("table_{model}.txt")), &text)?;
        stdout.push_str(&text);
        stdout.push('\n');

        let names: Vec<&str> = row.iter().map(|c| c.algorithm.name()).collect();
        let traces: Vec<Option<&[f64]>> = row
            .iter()
            .map(|c| c.report.as_ref().map(|r| r.mean_trace.as_slice()))
            .collect();
        write_file(
            &args.out.join(format!("trace_{model}.csv")),
            &trace_csv(&names, &traces),
        )?;
        tables.push(ModelTable { model, rows });
    }

    let doc = CompareDocument {
        command: "compare".into(),
        config: echo,
        iterations: args.iters,
        population: args.population,
        cells,
        tables,
    };
    write_file(&args.out.join("compare.json"), &to_json(&doc)?)?;
    emit(&stdout)?;

    if !failures.is_empty() {
        bail!(
            "{} of 9 experiments failed: {}",
            failures.len(),
            failures.join("; ")
        );
    }
    Ok(())
}

pub fn predict(args: &PredictArgs) -> Result<()> {
    let dataset = load(args.data.as_deref())?;
    let p = ParameterVector::new(args.model, args.coef.clone())?;
    let predicted = predict_all(args.model, &p, &dataset)?;

    let mut out = String::from("id,kloc,me,actual,predicted\n");
    for (r, e) in dataset.records().iter().zip(&predicted) {
        writeln!(out, "{},{},{},{},{}", r.id, r.kloc, r.me, r.effort, e)?;
    }
    match metrics::MetricsReport::compute(&dataset.efforts(), &predicted) {
        Ok(m) => {
            for (name, v) in metrics::MetricsReport::NAMES.iter().zip(m.values()) {
                writeln!(out, "{name}: {v}")?;
            }
        }
        Err(e) => writeln!(out, "metrics unavailable: {e}")?,
    }
    emit(&out)
}

/// Writes to stdout; a closed pipe (e.g. `| head`) is not an error.
fn emit(text: &str) -> Result<()> {
    match std::io::stdout().lock().write_all(text.as_bytes()) {
        Err(e) if e.kind() != std::io::ErrorKind::BrokenPipe => Err(e.into()),
        _ => Ok(()),
    }
}
