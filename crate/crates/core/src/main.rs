fn main() {
    std::process::exit(jsonsynth::cli::run(std::env::args_os()));
}
