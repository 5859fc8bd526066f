fn main() {
    std::process::exit(cadjust::cli::main());
}
