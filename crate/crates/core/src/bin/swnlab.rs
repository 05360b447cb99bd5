use clap::Parser;

fn main() {
    let cli = swnlab::cli::Cli::parse();
    let code = swnlab::cli::run(&cli, &mut std::io::stdout(), &mut std::io::stderr());
    std::process::exit(code);
}
