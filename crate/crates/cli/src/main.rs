fn main() {
    std::process::exit(soliton_cli::run(std::env::args_os()));
}
