use std::io;

fn main() {
    let stdout = io::stdout();
    let stderr = io::stderr();
    let code = pgx::cli::run(
        std::env::args_os(),
        |k| std::env::var(k).ok(),
        &mut stdout.lock(),
        &mut stderr.lock(),
    );
    std::process::exit(code);
}
