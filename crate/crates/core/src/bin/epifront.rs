fn main() {
    std::process::exit(epifront::cli::main_with_args(std::env::args_os()));
}
