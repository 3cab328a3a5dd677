fn main() {
    std::process::exit(warpineq_cli::run(std::env::args_os()));
}
