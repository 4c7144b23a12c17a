use clap::Parser;

fn main() {
    let cli = qwalk::cli::Cli::parse();
    std::process::exit(qwalk::cli::main_with(cli));
}
