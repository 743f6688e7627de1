use std::io::{self, Write};

fn main() {
    let stdout = io::stdout();
    let stderr = io::stderr();
    let mut out = io::BufWriter::new(stdout.lock());
    let mut err = stderr.lock();
    let mut stdin = io::stdin();
    let code = prolint::run(
        std::env::args_os(),
        &mut prolint::Io {
            stdin: &mut stdin,
            out: &mut out,
            err: &mut err,
        },
    );
    let _ = out.flush();
    drop(out);
    std::process::exit(code);
}
