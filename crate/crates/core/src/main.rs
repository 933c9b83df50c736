fn main() {
    std::process::exit(phaselight::cli::run());
}
