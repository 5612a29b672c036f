fn main() {
    std::process::exit(quasimicro_cli::run(std::env::args_os()));
}
