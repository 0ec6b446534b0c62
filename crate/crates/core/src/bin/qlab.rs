fn main() {
    std::process::exit(qlab::experiment::main_with_args(std::env::args_os()));
}
