use std::io;

fn main() {
    let code = eigenloop_cli::execute(
        std::env::args_os().collect(),
        &mut io::stdout().lock(),
        &mut io::stderr().lock(),
    );
    std::process::exit(code);
}
