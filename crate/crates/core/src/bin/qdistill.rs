fn main() {
    std::process::exit(qdistill::cli::main_with_args(std::env::args_os()));
}
