use clap::Parser;

fn main() {
    let cli = rulenet_cli::Cli::parse();
    if let Err(e) = rulenet_cli::run(cli) {
        eprintln!("error: {e}");
        std::process::exit(e.exit_code());
    }
}
