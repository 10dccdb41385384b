fn main() {
    std::process::exit(qalbp::cli::main());
}
