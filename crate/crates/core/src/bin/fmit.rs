fn main() {
    std::process::exit(fmit::cli::run(std::env::args_os()));
}
