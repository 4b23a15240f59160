fn main() {
    std::process::exit(ctlpp::cli::run());
}
