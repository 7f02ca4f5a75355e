fn main() {
    std::process::exit(ttgeo::cli::main_with_args(std::env::args_os()));
}
