fn main() {
    std::process::exit(ddgeo::cli::run(std::env::args_os()));
}
