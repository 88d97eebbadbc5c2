fn main() {
    std::process::exit(kg_lab::cli::run());
}
