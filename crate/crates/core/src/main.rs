fn main() {
    std::process::exit(hypvol::cli::run(std::env::args_os()));
}
