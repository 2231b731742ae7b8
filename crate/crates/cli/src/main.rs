fn main() {
    std::process::exit(fockdual_cli::run(std::env::args_os()));
}
