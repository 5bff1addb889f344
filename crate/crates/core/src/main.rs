use clap::Parser;
use tropvor::cli::{run, CommandSpec};

fn main() {
    std::process::exit(run(&CommandSpec::parse()));
}
