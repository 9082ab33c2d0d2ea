fn main() {
    std::process::exit(abroca_sim::cli::run(std::env::args_os()));
}
