fn main() {
    std::process::exit(spinobs::cli::main_with_args(std::env::args_os()));
}
