fn main() {
    std::process::exit(radixrat::cli::run(std::env::args_os()));
}
