fn main() {
    std::process::exit(goursat::cli::run(std::env::args_os()));
}
