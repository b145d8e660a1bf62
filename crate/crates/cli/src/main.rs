use clap::Parser;

fn main() {
    std::process::exit(dsql_sim::main_with(dsql_sim::Cli::parse()));
}
