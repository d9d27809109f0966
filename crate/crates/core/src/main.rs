use clap::Parser;

fn main() -> std::process::ExitCode {
    // clap reserves exit code 2 for usage errors, but this tool uses 2 for
    // the DEGENERATE verdict; route usage errors to 1 instead
    let cli = match facetsym::cli::Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = u8::from(e.use_stderr());
            let _ = e.print();
            return std::process::ExitCode::from(code);
        }
    };
    std::process::ExitCode::from(facetsym::cli::run(&cli))
}
