fn main() {
    std::process::exit(ggbayes_cli::run(std::env::args_os()));
}
