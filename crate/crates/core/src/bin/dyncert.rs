fn main() {
    std::process::exit(dyncert::cli::main_with_args(std::env::args_os()));
}
