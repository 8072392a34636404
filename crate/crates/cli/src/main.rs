use clap::Parser;

fn main() {
    let cli = aapt_cli::args::Cli::parse();
    std::process::exit(aapt_cli::execute(&cli));
}
