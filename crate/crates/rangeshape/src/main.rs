fn main() {
    std::process::exit(rangeshape::cli::execute(std::env::args_os()));
}
