use clap::Parser;

fn main() {
    let cli = sharbly::cli::Cli::parse();
    let code = sharbly::cli::run(&cli, &mut std::io::stdout().lock());
    std::process::exit(code);
}
