fn main() {
    std::process::exit(tribinom::cli::run(std::env::args_os()));
}
