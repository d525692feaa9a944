fn main() {
    std::process::exit(ifccr::cli::main_entry());
}
