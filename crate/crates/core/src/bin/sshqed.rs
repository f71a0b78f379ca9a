fn main() {
    std::process::exit(sshqed::cli::run(std::env::args_os()));
}
