use clap::Parser;

fn main() {
    let args = profdecomp::cli::Args::parse();
    std::process::exit(profdecomp::cli::main_with(args));
}
