fn main() {
    std::process::exit(qbounce_cli::app::main_with_args(std::env::args_os()));
}
