fn main() {
    std::process::exit(relquant_cli::run(std::env::args_os()));
}
