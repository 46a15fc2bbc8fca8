fn main() {
    std::process::exit(degenheat::main_with_args(std::env::args_os()));
}
