fn main() {
    std::process::exit(phynet_cli::run(std::env::args()));
}
