use std::path::Path;

use modefir::bench::{fixtures, generate, run_timing, SyntheticSpec};
use modefir::Signal;

use crate::error::CliError;
use crate::io::{self, fmt_num};
use crate::BenchArgs;

pub const TIMINGS_FILE: &str = "timings.csv";
pub const SPEC_FILE: &str = "spec.json";

fn load_spec(arg: &str) -> Result<SyntheticSpec, CliError> {
    let path = Path::new(arg);
    if path.exists() {
        let text = std::fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
        return SyntheticSpec::from_json(&text).map_err(|e| CliError::io(path, e));
    }
    fixtures::by_name(arg).ok_or_else(|| {
        CliError::Input(format!(
            "{arg}: no such file or stored fixture (example1, example2, lod_analog)"
        ))
    })
}

pub fn run(args: BenchArgs) -> Result<(), CliError> {
    let mut spec = load_spec(&args.spec)?;
    if let Some(n) = args.n {
        spec = spec.with_len(n);
        spec.validate().map_err(CliError::from_core)?;
    }
    if args.methods.is_empty() {
        return Err(CliError::Input("no methods given".into()));
    }
    let cfg = args.config.build(modefir::Method::Fif)?;
    let (signal, _): (Signal, _) = generate(&spec).map_err(CliError::from_core)?;
    let rows =
        run_timing(&signal, &args.methods, &cfg, args.repeats).map_err(CliError::from_core)?;

    io::create_dir(&args.out)?;
    io::write_json(&args.out.join(SPEC_FILE), &spec)?;
    let path = args.out.join(TIMINGS_FILE);
    let mut w = csv::Writer::from_path(&path).map_err(|e| CliError::io(&path, e))?;
    w.write_record([
        "method",
        "n",
        "median_seconds",
        "imf_count",
        "iterations",
        "repeat_seconds",
        "status",
    ])
    .map_err(|e| CliError::io(&path, e))?;
    let mut failed = Vec::new();
    for (method, row) in &rows {
        let record = match row {
            Ok(r) => {
                println!(
                    "{method:>6}  n={}  median {:.4}s  {} IMFs",
                    r.n, r.seconds, r.imf_count
                );
                vec![
                    method.to_string(),
                    r.n.to_string(),
                    fmt_num(r.seconds),
                    r.imf_count.to_string(),
                    join(r.iterations.iter().map(|v| v.to_string())),
                    join(r.repeats.iter().map(|&v| fmt_num(v))),
                    "ok".into(),
                ]
            }
            Err(e) => {
                eprintln!("warning: {method} failed: {e}");
                failed.push(method.to_string());
                let blanks = std::iter::repeat_n(String::new(), 4);
                [method.to_string(), signal.len().to_string()]
                    .into_iter()
                    .chain(blanks)
                    .chain([e.to_string()])
                    .collect()
            }
        };
        w.write_record(record).map_err(|e| CliError::io(&path, e))?;
    }
    w.flush().map_err(|e| CliError::io(&path, e))?;
    if failed.is_empty() {
        Ok(())
    } else {
        Err(CliError::Engine(format!(
            "methods failed: {}",
            failed.join(", ")
        )))
    }
}

fn join(items: impl Iterator<Item = String>) -> String {
    items.collect::<Vec<_>>().join(";")
}
