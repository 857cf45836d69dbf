use clap::Parser;

fn main() {
    let cli = ruelle_cli::Cli::parse();
    std::process::exit(ruelle_cli::execute(&cli));
}
