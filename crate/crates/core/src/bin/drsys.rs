fn main() {
    std::process::exit(drsys::cli::run(std::env::args_os()));
}
