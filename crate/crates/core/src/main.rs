fn main() {
    std::process::exit(regvqe::cli::main_with(std::env::args_os()));
}
