fn main() {
    std::process::exit(fastdec::cli::run(std::env::args_os()));
}
