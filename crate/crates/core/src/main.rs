fn main() {
    let code = cyclecut::cli::run(std::env::args_os());
    std::process::exit(code);
}
