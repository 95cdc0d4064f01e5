fn main() {
    std::process::exit(adra_sim::cli::run());
}
