fn main() {
    std::process::exit(lexdis::cli::main());
}
