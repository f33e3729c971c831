fn main() {
    std::process::exit(icefish_cli::run(std::env::args_os()));
}
