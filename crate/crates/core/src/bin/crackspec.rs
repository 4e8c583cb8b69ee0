fn main() {
    std::process::exit(crackspec::cli::run(std::env::args().collect()));
}
