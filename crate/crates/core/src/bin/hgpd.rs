fn main() {
    let code = higher_groupoids::cli::run(std::env::args(), &mut std::io::stdin(), &mut std::io::stdout(), &mut std::io::stderr());
    std::process::exit(code);
}
