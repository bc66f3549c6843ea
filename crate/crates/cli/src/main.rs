fn main() {
    std::process::exit(tevo_cli::main_with_args(std::env::args_os()));
}
