fn main() {
    std::process::exit(fairdoc_service::cli::main());
}
