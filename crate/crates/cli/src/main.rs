fn main() {
    std::process::exit(fzspec_cli::main_with(std::env::args_os()));
}
