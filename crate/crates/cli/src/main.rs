use std::io::{stderr, stdout};

fn main() {
    let env_tol = std::env::var(qsigma::app::TOL_ENV).ok();
    let code = qsigma::run(std::env::args_os(), env_tol.as_deref(), &mut stdout().lock(), &mut stderr().lock());
    std::process::exit(code);
}
