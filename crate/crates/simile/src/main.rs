fn main() -> std::process::ExitCode {
    simile::cli::main()
}
