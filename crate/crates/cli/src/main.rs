use std::io::Write;

fn main() {
    let out = cthermo::run(std::env::args());
    std::io::stdout().write_all(&out.stdout).expect("stdout");
    eprint!("{}", out.stderr);
    std::process::exit(out.code);
}
