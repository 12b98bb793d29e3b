fn main() {
    std::process::exit(mpdc::cli::main());
}
