fn main() -> std::process::ExitCode {
    minfinity::cli::main()
}
