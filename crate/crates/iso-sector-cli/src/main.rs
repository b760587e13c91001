fn main() {
    std::process::exit(iso_sector_cli::run(std::env::args_os()));
}
