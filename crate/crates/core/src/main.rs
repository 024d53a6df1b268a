use clap::Parser;

fn main() {
    let cli = superber::cli::Cli::parse();
    let code = superber::cli::run(cli, &mut std::io::stdout(), &mut std::io::stderr());
    std::process::exit(code);
}
