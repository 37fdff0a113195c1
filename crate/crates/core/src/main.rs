use clap::Parser;

use jsr_lipschitz::cli::{run, RunConfig};

fn main() {
    let config = RunConfig::parse();
    let status = run(&config, &mut std::io::stdout(), &mut std::io::stderr());
    std::process::exit(status);
}
