fn main() {
    std::process::exit(kfib::cli::run(std::env::args_os()));
}
