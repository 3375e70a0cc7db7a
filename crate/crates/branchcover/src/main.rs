fn main() {
    std::process::exit(branchcover::cli::run(std::env::args_os()));
}
