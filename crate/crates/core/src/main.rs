fn main() {
    std::process::exit(search_schemes::cli::run(std::env::args_os()));
}
