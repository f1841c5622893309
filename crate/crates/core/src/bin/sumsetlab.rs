fn main() {
    std::process::exit(sumsetlab::cli::run());
}
