fn main() {
    std::process::exit(neq_core::cli::run(std::env::args_os()));
}
