fn main() {
    std::process::exit(expander_core::commands::main_with(std::env::args_os()));
}
