fn main() {
    std::process::exit(oneone::cli::run_main());
}
