use modefir::metrics::FirstImfReference;
use modefir::{Method, Signal};
use rayon::prelude::*;

use crate::error::CliError;
use crate::io::{self, fmt_num};
use crate::SweepArgs;

pub const SWEEP_FILE: &str = "sweep.csv";
pub const THREADS_VAR: &str = "MODEFIR_THREADS";

/// Parses `start:stop:step` into the points `start + i * step <= stop`.
///
/// Points are rounded to 12 decimals so `0.1:0.3:0.1` gives `0.3`, not
/// `0.30000000000000004`.
pub fn parse_grid(spec: &str) -> Result<Vec<f64>, CliError> {
    let bad = |why: &str| CliError::Input(format!("grid {spec:?}: {why}"));
    let parts: Vec<f64> = spec
        .split(':')
        .map(|p| p.trim().parse::<f64>())
        .collect::<Result<_, _>>()
        .map_err(|_| bad("expected start:stop:step"))?;
    let [start, stop, step] = parts[..] else {
        return Err(bad("expected start:stop:step"));
    };
    if !(start.is_finite() && stop.is_finite() && step.is_finite()) || step <= 0.0 {
        return Err(bad("step must be positive and all values finite"));
    }
    if stop < start {
        return Err(bad("empty grid"));
    }
    let count = ((stop - start) / step + 1e-9).floor() as usize + 1;
    Ok((0..count)
        .map(|i| ((start + i as f64 * step) * 1e12).round() / 1e12)
        .collect())
}

fn thread_pool() -> Result<rayon::ThreadPool, CliError> {
    let mut builder = rayon::ThreadPoolBuilder::new();
    if let Ok(v) = std::env::var(THREADS_VAR) {
        let n: usize = v.parse().ok().filter(|&n| n > 0).ok_or_else(|| {
            CliError::Input(format!("{THREADS_VAR}={v:?} is not a positive integer"))
        })?;
        builder = builder.num_threads(n);
    }
    builder.build().map_err(|e| CliError::Engine(e.to_string()))
}

pub fn run(args: SweepArgs) -> Result<(), CliError> {
    let taus = parse_grid(&args.tau_grid)?;
    let kappas = match (&args.kappa_grid, args.method) {
        (Some(g), Method::Dfif) => Some(parse_grid(g)?),
        (Some(_), _) => return Err(CliError::Input("--kappa-grid applies to dfif only".into())),
        (None, Method::Dfif) => None,
        (None, Method::Htfif) => None,
        (None, m) => {
            return Err(CliError::Input(format!(
                "sweep supports dfif and htfif, not {m}"
            )))
        }
    };
    let samples = io::read_signal(&args.input.path()?, args.input.column)?;
    let signal = Signal::new(samples).map_err(CliError::from_core)?;
    let cfg = args.config.build(Method::Fif)?;
    let kappas = kappas.unwrap_or_else(|| vec![cfg.kappa]);
    let reference = FirstImfReference::new(&signal, &cfg).map_err(CliError::from_core)?;

    let points: Vec<(f64, f64)> = match args.method {
        Method::Dfif => taus
            .iter()
            .flat_map(|&t| kappas.iter().map(move |&k| (t, k)))
            .collect(),
        _ => taus.iter().map(|&t| (t, f64::NAN)).collect(),
    };
    let errors: Vec<f64> = thread_pool()?
        .install(|| {
            points
                .par_iter()
                .map(|&(tau, kappa)| match args.method {
                    Method::Dfif => reference.dfif_error(tau, kappa),
                    _ => reference.htfif_error(tau),
                })
                .collect::<Result<_, _>>()
        })
        .map_err(CliError::from_core)?;

    io::create_dir(&args.out)?;
    let path = args.out.join(SWEEP_FILE);
    let mut w = csv::Writer::from_path(&path).map_err(|e| CliError::io(&path, e))?;
    let dfif = args.method == Method::Dfif;
    let header: &[&str] = if dfif {
        &["tau", "kappa", "err"]
    } else {
        &["tau", "err"]
    };
    w.write_record(header).map_err(|e| CliError::io(&path, e))?;
    for (&(tau, kappa), &err) in points.iter().zip(&errors) {
        let row = if dfif {
            vec![fmt_num(tau), fmt_num(kappa), fmt_num(err)]
        } else {
            vec![fmt_num(tau), fmt_num(err)]
        };
        w.write_record(row).map_err(|e| CliError::io(&path, e))?;
    }
    w.flush().map_err(|e| CliError::io(&path, e))?;

    let best = points
        .iter()
        .zip(&errors)
        .min_by(|a, b| a.1.total_cmp(b.1))
        .expect("grid is non-empty");
    let at = if dfif {
        format!("tau={}, kappa={}", best.0 .0, best.0 .1)
    } else {
        format!("tau={}", best.0 .0)
    };
    println!(
        "{} points, filter half-support {}; minimum error {:.4e} at {at}",
        points.len(),
        reference.half_support(),
        best.1
    );
    Ok(())
}
