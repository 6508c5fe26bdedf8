use std::io;

fn main() {
    kcontact::cli::init_threads();
    let code = kcontact::cli::run_with(std::env::args_os(), &mut io::stdout(), &mut io::stderr());
    std::process::exit(code);
}
