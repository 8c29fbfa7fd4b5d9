fn main() {
    let code = wspe_cli::run(std::env::args_os());
    std::process::exit(code);
}
