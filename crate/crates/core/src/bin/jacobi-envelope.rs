fn main() {
    std::process::exit(jacobi_envelope::cli::run(std::env::args_os()));
}
