use std::io::Write;

fn main() {
    let (code, out) = courant::cli::run(std::env::args_os());
    let written = if code == courant::cli::EXIT_ERROR {
        std::io::stderr().write_all(out.as_bytes())
    } else {
        std::io::stdout().write_all(out.as_bytes())
    };
    if written.is_err() {
        std::process::exit(courant::cli::EXIT_ERROR);
    }
    std::process::exit(code);
}
