fn main() {
    let code = latitude::cli::cli_main(std::env::args().skip(1));
    std::process::exit(code);
}
