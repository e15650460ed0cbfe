fn main() {
    std::process::exit(fieldplan::cli::run(std::env::args_os()));
}
