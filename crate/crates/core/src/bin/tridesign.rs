fn main() {
    std::process::exit(tridesign::cli::run(std::env::args_os()));
}
