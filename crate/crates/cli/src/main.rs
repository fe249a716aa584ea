fn main() {
    std::process::exit(optobessel_cli::run(std::env::args_os()));
}
