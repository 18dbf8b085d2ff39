fn main() {
    std::process::exit(centersig::cli::run());
}
