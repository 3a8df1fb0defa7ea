fn main() {
    std::process::exit(lattice_llt::cli::run(std::env::args_os()));
}
