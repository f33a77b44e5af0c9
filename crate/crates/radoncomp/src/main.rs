fn main() -> std::process::ExitCode {
    let code = radoncomp::cli::main_with(std::env::args_os());
    std::process::ExitCode::from(code as u8)
}
