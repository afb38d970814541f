fn main() {
    std::process::exit(spectra::run(std::env::args_os()));
}
