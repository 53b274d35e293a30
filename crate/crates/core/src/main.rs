use clap::Parser;
use malkin_cylinder::cli::{run, Cli};

fn main() {
    std::process::exit(run(&Cli::parse()));
}
