fn main() {
    std::process::exit(specscale::cli::main_with_args(std::env::args_os()));
}
