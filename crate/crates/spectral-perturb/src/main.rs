fn main() {
    std::process::exit(spectral_perturb::cli::run(std::env::args()));
}
