// SPDX-License-Identifier: Apache-2.0

use std::io::Write;

fn main() {
    let mut out = std::io::BufWriter::new(std::io::stdout());
    let code = polya_cli::run(std::env::args_os(), &mut out, &mut std::io::stderr());
    let _ = out.flush();
    std::process::exit(code);
}
