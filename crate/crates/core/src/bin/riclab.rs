fn main() {
    std::process::exit(riclab::cli::main_with_args(std::env::args_os()));
}
