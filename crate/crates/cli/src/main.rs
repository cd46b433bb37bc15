fn main() {
    eprintln!("heegaard: command-line interface under construction");
    std::process::exit(2);
}
