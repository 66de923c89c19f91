use std::io::{self, Write};
use std::process::ExitCode;

use clap::Parser;
use ncycle_cli::{run, JobSpec, Status};

fn main() -> ExitCode {
    let job = match JobSpec::try_parse() {
        Ok(job) => job,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { Status::InputError.code() } else { 0 });
        }
    };
    let mut out = io::BufWriter::new(io::stdout());
    let status = match run(&job, &mut out) {
        Ok(s) => s,
        Err(e) => {
            let _ = out.flush();
            eprintln!("ncycle: {e}");
            e.status()
        }
    };
    let _ = out.flush();
    ExitCode::from(status.code())
}
