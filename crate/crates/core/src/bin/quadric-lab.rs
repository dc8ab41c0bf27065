use clap::Parser;

fn main() {
    let cli = quadric_lab::cli::Cli::parse();
    std::process::exit(quadric_lab::cli::run(cli));
}
