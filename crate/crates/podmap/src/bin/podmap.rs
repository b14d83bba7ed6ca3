fn main() {
    std::process::exit(podmap::cli::run(std::env::args()));
}
