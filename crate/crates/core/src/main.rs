fn main() {
    let (code, out) = colored_homology::knotio::run_command(std::env::args_os());
    if code == 2 {
        eprint!("{out}");
    } else {
        print!("{out}");
    }
    std::process::exit(code);
}
