fn main() {
    std::process::exit(ctxevo_cli::run(std::env::args_os()));
}
