fn main() -> std::process::ExitCode {
    counterlab::cli::run()
}
