fn main() {
    std::process::exit(theta6_cli::run(std::env::args_os()));
}
