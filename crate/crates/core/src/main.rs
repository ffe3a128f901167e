fn main() {
    std::process::exit(orlicz::cli::run());
}
