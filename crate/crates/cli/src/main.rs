fn main() {
    std::process::exit(csbf_cli::run(std::env::args().skip(1)));
}
