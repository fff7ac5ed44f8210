use std::io::Write;

fn main() {
    let outcome = seqgroves_cli::main_with_args(std::env::args_os());
    let mut stdout = std::io::stdout().lock();
    let _ = stdout.write_all(outcome.stdout.as_bytes());
    let _ = stdout.flush();
    std::process::exit(outcome.code);
}
