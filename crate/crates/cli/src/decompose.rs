use std::time::Instant;

use modefir::engine::decompose;
use modefir::Signal;

use crate::error::CliError;
use crate::run::{self, RunManifest};
use crate::{io, DecomposeArgs};

pub fn run(args: DecomposeArgs) -> Result<(), CliError> {
    let (input, column, cfg) = match &args.manifest {
        Some(path) => {
            let m = RunManifest::load(path)?;
            let mut cfg = m.config;
            args.config.apply(&mut cfg);
            cfg.validate().map_err(CliError::from_core)?;
            (m.input, m.column, cfg)
        }
        None => {
            let method = args
                .method
                .ok_or_else(|| CliError::Input("--method is required".into()))?;
            let input = args.input.path()?;
            (input, args.input.column, args.config.build(method)?)
        }
    };
    let samples = io::read_signal(&input, column)?;
    let signal = Signal::new(samples).map_err(CliError::from_core)?;

    let start = Instant::now();
    let d = decompose(&signal, &cfg).map_err(CliError::from_core)?;
    let wall = start.elapsed().as_secs_f64();

    io::create_dir(&args.out)?;
    run::write_imfs(&args.out, &d)?;
    io::write_json(
        &args.out.join(run::MANIFEST_FILE),
        &RunManifest::new(&input, column, &d, wall),
    )?;
    println!(
        "{}: {} IMFs from {} samples in {wall:.3}s ({:?})",
        cfg.method,
        d.imfs.len(),
        signal.len(),
        d.termination
    );
    Ok(())
}
