fn main() -> std::process::ExitCode {
    editweight::cli::main()
}
