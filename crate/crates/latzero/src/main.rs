fn main() {
    std::process::exit(latzero::cli::run());
}
