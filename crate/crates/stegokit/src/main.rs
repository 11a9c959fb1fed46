use clap::Parser;

fn main() {
    let cli = stegokit::cli::Cli::parse();
    std::process::exit(stegokit::cli::run(cli));
}
