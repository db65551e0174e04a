fn main() {
    std::process::exit(dilators::cli::main());
}
