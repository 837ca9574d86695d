fn main() -> std::process::ExitCode {
    mmdscan::cli::main()
}
