fn main() {
    std::process::exit(cypol::cli::run(std::env::args_os()));
}
