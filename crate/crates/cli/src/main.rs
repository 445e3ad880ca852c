fn main() {
    std::process::exit(hyperpedal_cli::run(std::env::args_os()));
}
