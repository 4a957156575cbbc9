fn main() {
    let code = ranloop_cli::run(std::env::args_os(), &mut std::io::stdout());
    std::process::exit(code);
}
