use charmat_cli::{exit, Cli};
use clap::Parser;

fn main() {
    env_logger::Builder::from_env(env_logger::Env::default().filter_or("CHARMAT_LOG", "warn"))
        .init();
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            // help and version requests are not errors; malformed flags are violations
            std::process::exit(if e.use_stderr() {
                exit::INVARIANT
            } else {
                exit::PASS
            });
        }
    };
    std::process::exit(charmat_cli::run(&cli));
}
