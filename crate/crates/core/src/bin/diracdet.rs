use clap::Parser;
use diracdet::cli::{main_with, CliConfig};

fn main() {
    let config = CliConfig::parse();
    std::process::exit(main_with(&config));
}
