fn main() { std::process::exit(pure_circuit::cli::run_main()); }
