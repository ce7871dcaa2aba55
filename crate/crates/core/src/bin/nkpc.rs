fn main() {
    std::process::exit(nkpc::cli::run(std::env::args_os()));
}
