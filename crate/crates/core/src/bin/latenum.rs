fn main() {
    std::process::exit(latenum::cli::main_with_args(std::env::args_os()));
}
