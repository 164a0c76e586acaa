fn main() {
    std::process::exit(qsc::cli::run(std::env::args_os()));
}
