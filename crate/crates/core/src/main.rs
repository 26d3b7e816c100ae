fn main() {
    std::process::exit(majlab::cli::run_from(std::env::args_os()));
}
