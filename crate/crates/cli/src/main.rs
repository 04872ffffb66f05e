fn main() {
    std::process::exit(coxdiv_cli::main_with(std::env::args_os()));
}
