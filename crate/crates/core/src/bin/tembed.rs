fn main() {
    std::process::exit(tembed::cli::main());
}
