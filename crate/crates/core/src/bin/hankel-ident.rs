fn main() {
    std::process::exit(hankel_ident::cli::run(std::env::args_os()));
}
