fn main() {
    std::process::exit(rispower::cli::main());
}
