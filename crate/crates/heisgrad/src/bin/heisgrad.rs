fn main() {
    let (code, out) = heisgrad::cli::run(std::env::args_os());
    print!("{out}");
    std::process::exit(code);
}
