fn main() {
    std::process::exit(funcobs::cli::run(std::env::args_os()));
}
