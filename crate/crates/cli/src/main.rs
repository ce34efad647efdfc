use std::io;

fn main() {
    let code = tmkg_cli::run(std::env::args_os().skip(1), &mut io::stdout().lock(), &mut io::stderr().lock());
    std::process::exit(code);
}
