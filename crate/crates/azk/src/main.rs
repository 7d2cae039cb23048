use std::io::Write;

fn main() {
    let color = std::env::var("AZK_COLOR").ok();
    let out = azk::run(std::env::args_os(), color.as_deref());
    print!("{}", out.stdout);
    eprint!("{}", out.stderr);
    let _ = std::io::stdout().flush();
    std::process::exit(out.code);
}
