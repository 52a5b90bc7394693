fn main() -> std::process::ExitCode {
    sicpath::cli::main_from_env()
}
