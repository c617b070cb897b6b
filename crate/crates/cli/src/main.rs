fn main() {
    eprintln!("feynred: no subcommands implemented yet");
    std::process::exit(2);
}
