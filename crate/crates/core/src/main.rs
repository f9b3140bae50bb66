fn main() {
    std::process::exit(ambush::cli::run(std::env::args_os()));
}
