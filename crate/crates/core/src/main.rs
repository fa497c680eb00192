fn main() {
    std::process::exit(altchain::cli::main_with_args(std::env::args_os()));
}
