fn main() {
    std::process::exit(algclosure::cli::main_with_args(std::env::args_os()));
}
