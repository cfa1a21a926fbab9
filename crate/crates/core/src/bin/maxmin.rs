fn main() {
    std::process::exit(maxmin::cli::main_with_args(std::env::args_os()));
}
