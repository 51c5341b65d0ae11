fn main() {
    std::process::exit(fermi_charts::cli::run());
}
