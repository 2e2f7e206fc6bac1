use clap::Parser;

fn main() {
    let cli = smshift::cli::Cli::parse();
    if let Err(e) = smshift::cli::run(cli) {
        eprintln!("smshift: {e}");
        std::process::exit(e.exit_code());
    }
}
