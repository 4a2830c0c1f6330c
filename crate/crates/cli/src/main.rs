use std::io::Write;

fn main() {
    let env = std::env::var(dessin_cli::PRECISION_ENV).ok();
    let outcome = dessin_cli::main_with(std::env::args_os(), env.as_deref());
    std::io::stdout().write_all(&outcome.stdout).expect("stdout");
    eprint!("{}", outcome.stderr);
    std::process::exit(outcome.code);
}
