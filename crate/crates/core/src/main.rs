use std::io::Write;

fn main() {
    if let Err(e) = pinfloer::cli::configure_threads() {
        eprintln!("error: {e}");
        std::process::exit(2);
    }
    let out = pinfloer::cli::run(std::env::args_os());
    print!("{}", out.stdout);
    eprint!("{}", out.stderr);
    let _ = std::io::stdout().flush();
    std::process::exit(out.code);
}
