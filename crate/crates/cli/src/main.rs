use std::process::exit;

fn main() {
    exit(exprank_cli::run_with_args(std::env::args()));
}
