fn main() {
    std::process::exit(wlsim::cli::run());
}
