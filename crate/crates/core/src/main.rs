fn main() {
    let code = fixedloci::cli::main_with(std::env::args_os(), &mut std::io::stdout().lock());
    std::process::exit(code);
}
