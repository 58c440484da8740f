fn main() {
    let precision = std::env::var(polycycle::cli::PRECISION_ENV).ok();
    std::process::exit(polycycle::cli::main_with(std::env::args_os(), precision.as_deref()));
}
