fn main() {
    std::process::exit(omega::cli::run());
}
