use std::io::Write;

fn main() {
    let (code, out, err) = orbifloer_cli::run_args(std::env::args_os());
    if !out.is_empty() {
        let mut stdout = std::io::stdout().lock();
        let _ = writeln!(stdout, "{}", out.trim_end());
    }
    if !err.is_empty() {
        eprintln!("{err}");
    }
    std::process::exit(code);
}
