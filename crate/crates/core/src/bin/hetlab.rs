use hetlab::cli::{run_args, RunContext, EXIT_ERROR};

fn main() {
    let ctx = match RunContext::from_env() {
        Ok(ctx) => ctx,
        Err(e) => {
            eprintln!("error: {e}");
            std::process::exit(EXIT_ERROR);
        }
    };
    let out = run_args(std::env::args_os(), &ctx);
    print!("{}", out.stdout);
    eprint!("{}", out.stderr);
    std::process::exit(out.code);
}
