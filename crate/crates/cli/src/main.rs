fn main() {
    std::process::exit(ptmoments_cli::run(std::env::args_os()));
}
