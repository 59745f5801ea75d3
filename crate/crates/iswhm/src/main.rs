use clap::Parser;

fn main() {
    let cli = iswhm::cli::Cli::parse();
    let code = iswhm::cli::run(cli, &mut std::io::stdout().lock(), &mut std::io::stderr().lock());
    std::process::exit(code);
}
