fn main() {
    std::process::exit(chance_order::cli::run_cli(std::env::args_os()));
}
