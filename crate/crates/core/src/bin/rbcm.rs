fn main() -> std::process::ExitCode {
    rbcm::cli::main()
}
