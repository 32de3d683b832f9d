fn main() {
    std::process::exit(fitting_core::pipeline::cli_main(std::env::args_os()));
}
