fn main() {
    std::process::exit(dirac_spectra::cli::run(std::env::args_os()));
}
