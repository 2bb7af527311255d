fn main() {
    std::process::exit(diaq::cli::main());
}
