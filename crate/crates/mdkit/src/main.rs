fn main() {
    std::process::exit(mdkit::cli::run(std::env::args()));
}
