fn main() {
    std::process::exit(eof_bounds::cli::run(std::env::args_os()));
}
