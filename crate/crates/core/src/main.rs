use clap::Parser;

use gibbs_trees::cli::{run, Cli};

fn main() {
    std::process::exit(run(Cli::parse()));
}
