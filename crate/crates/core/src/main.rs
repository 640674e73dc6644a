fn main() {
    let code = secgraph::cli::run(std::env::args_os());
    std::process::exit(code);
}
