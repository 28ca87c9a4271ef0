fn main() {
    std::process::exit(stochcover::cli::run(std::env::args_os()));
}
