fn main() {
    std::process::exit(gabor_cs::cli::cli_dispatch(std::env::args_os()));
}
