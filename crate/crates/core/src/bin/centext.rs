fn main() {
    std::process::exit(centext::cli::run(std::env::args_os()));
}
