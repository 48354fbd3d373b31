fn main() {
    std::process::exit(pseudoquant::cli::main_with_env());
}
