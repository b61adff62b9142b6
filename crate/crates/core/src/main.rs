fn main() {
    std::process::exit(flatfix::cli::main_with_args());
}
