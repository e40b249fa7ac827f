fn main() {
    std::process::exit(dimlab::lab::main_with_args(std::env::args_os()));
}
