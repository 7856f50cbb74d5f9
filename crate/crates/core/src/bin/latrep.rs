use clap::Parser;
use lattice_repr::cli::{run, Cli};

fn main() {
    std::process::exit(run(Cli::parse()));
}
