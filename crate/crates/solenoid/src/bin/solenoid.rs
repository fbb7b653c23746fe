fn main() {
    std::process::exit(solenoid::cli::run(std::env::args_os()));
}
