fn main() {
    std::process::exit(transverse_cli::run(std::env::args_os()));
}
