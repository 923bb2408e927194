fn main() {
    std::process::exit(scd_cli::cli_main(std::env::args_os()));
}
