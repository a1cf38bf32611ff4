fn main() {
    std::process::exit(floquet_lrr::cli::run(std::env::args_os()));
}
