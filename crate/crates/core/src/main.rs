use clap::Parser;

fn main() {
    let cli = lisl::cli::Cli::parse();
    let mut stdout = std::io::stdout().lock();
    std::process::exit(lisl::cli::run(cli, &mut stdout));
}
