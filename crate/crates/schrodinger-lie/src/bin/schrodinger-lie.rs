fn main() {
    std::process::exit(schrodinger_lie::cli::run(std::env::args_os()));
}
