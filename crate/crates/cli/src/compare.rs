use modefir::metrics::compare_decompositions;
use modefir::CompareMode;

use crate::error::CliError;
use crate::io::{self, fmt_num};
use crate::{run, CompareArgs};

pub const ERRORS_FILE: &str = "errors.csv";

pub fn run(args: CompareArgs) -> Result<(), CliError> {
    let (_, a) = run::load(&args.a)?;
    let (_, b) = run::load(&args.b)?;
    if a.remainder.len() != b.remainder.len() {
        return Err(CliError::Input(format!(
            "runs have different lengths ({} vs {})",
            a.remainder.len(),
            b.remainder.len()
        )));
    }
    let mode = if args.shared_remainder {
        CompareMode::SharedRemainder
    } else {
        CompareMode::Independent
    };
    let report = compare_decompositions(&a, &b, mode).map_err(CliError::from_core)?;
    for note in &report.notes {
        eprintln!("warning: {note}");
    }

    io::create_dir(&args.out)?;
    let path = args.out.join(ERRORS_FILE);
    let mut w = csv::Writer::from_path(&path).map_err(|e| CliError::io(&path, e))?;
    w.write_record(["imf_index", "rel_error", "bound"])
        .map_err(|e| CliError::io(&path, e))?;
    for (i, (err, bound)) in report.per_imf_error.iter().zip(&report.bound).enumerate() {
        w.write_record([
            (i + 1).to_string(),
            fmt_num(*err),
            bound.map(fmt_num).unwrap_or_default(),
        ])
        .map_err(|e| CliError::io(&path, e))?;
    }
    w.flush().map_err(|e| CliError::io(&path, e))?;

    let (ma, mb) = report.method_pair;
    println!(
        "{ma} ({} IMFs) vs {mb} ({} IMFs), {mode:?}",
        report.imf_counts.0, report.imf_counts.1
    );
    println!("{:>4}  {:>12}  {:>12}", "imf", "rel_error", "bound");
    for (i, (err, bound)) in report.per_imf_error.iter().zip(&report.bound).enumerate() {
        let bound = bound.map_or("-".to_string(), |b| format!("{b:.4e}"));
        println!("{:>4}  {err:>12.4e}  {bound:>12}", i + 1);
    }
    Ok(())
}
