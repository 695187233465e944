use std::io::Write;
use std::process::ExitCode;

fn main() -> ExitCode {
    let out = qgraph_cli::run_cli(std::env::args_os());
    let doc = serde_json::to_string_pretty(&out.json).expect("JSON value serializes");
    let _ = writeln!(std::io::stdout().lock(), "{doc}");
    if out.verbose || out.code == qgraph_cli::EXIT_INPUT {
        let _ = writeln!(std::io::stderr().lock(), "{}", out.summary);
    }
    ExitCode::from(out.code as u8)
}
