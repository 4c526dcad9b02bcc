fn main() {
    std::process::exit(veritag::cli::main_with_args(std::env::args_os()));
}
