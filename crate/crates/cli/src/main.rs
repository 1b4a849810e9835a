fn main() {
    std::process::exit(iqp_cli::run(std::env::args_os()));
}
