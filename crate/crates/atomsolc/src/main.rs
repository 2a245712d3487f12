use clap::Parser;

fn main() {
    let cli = atomsolc::config::Cli::parse();
    if let Err(err) = atomsolc::run::run(cli) {
        eprintln!("atomsolc: {err}");
        std::process::exit(err.exit_code());
    }
}
