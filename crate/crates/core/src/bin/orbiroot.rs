fn main() {
    std::process::exit(orbiroot_core::cli::run(std::env::args_os()));
}
