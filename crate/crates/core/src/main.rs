fn main() {
    std::process::exit(cograte::cli::main());
}
