fn main() {
    std::process::exit(ising_exact::cli::run(std::env::args_os()));
}
