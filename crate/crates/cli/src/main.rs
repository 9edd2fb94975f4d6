use clap::Parser;

fn main() {
    let cli = axoball::Cli::parse();
    if let Err(err) = axoball::run(cli) {
        eprintln!("axoball: {err}");
        std::process::exit(err.exit_code());
    }
}
