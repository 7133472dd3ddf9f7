fn main() {
    std::process::exit(chainrebuild::cli::run(std::env::args_os()));
}
