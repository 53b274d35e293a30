//! The command pipeline driven from a configuration file, as the binary
//! does: check, malkin, verify and tables.
//!
//! `cargo run --example cli_pipeline -- [config.json] [out_dir]`

use std::path::PathBuf;

use malkin_cylinder::cli::{dispatch, Command, RunConfig};

fn main() -> malkin_cylinder::Result<()> {
    let mut args = std::env::args().skip(1);
    let path = args
        .next()
        .map(PathBuf::from)
        .unwrap_or_else(|| PathBuf::from(concat!(env!("CARGO_MANIFEST_DIR"), "/examples/configs/worked_nonsmooth.json")));
    let mut cfg = RunConfig::load(&path)?;
    cfg.output_dir = args.next().map(PathBuf::from).unwrap_or_else(|| std::env::temp_dir().join("malkin-cylinder-demo"));
    for command in [Command::Check, Command::Malkin, Command::Verify, Command::Tables] {
        let outcome = dispatch(command, &cfg)?;
        println!("== {command:?} (exit {}) ==\n{}", outcome.exit_code, outcome.report);
        println!("files: {}\n", outcome.files.join(", "));
    }
    println!("results in {}", cfg.output_dir.display());
    Ok(())
}
