fn main() -> std::process::ExitCode {
    std::process::ExitCode::from(ffhyper::cli::main())
}
