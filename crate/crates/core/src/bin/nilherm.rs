use std::io::Write;

fn main() {
    let (code, out) = nilherm::cli::run(std::env::args_os());
    let stream = if code == nilherm::cli::EXIT_INPUT { &mut std::io::stderr() as &mut dyn Write } else { &mut std::io::stdout() };
    let _ = stream.write_all(out.as_bytes());
    std::process::exit(code);
}
