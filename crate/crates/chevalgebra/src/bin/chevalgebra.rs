fn main() {
    let code = chevalgebra::cli::run(std::env::args(), &mut std::io::stdout());
    std::process::exit(code);
}
