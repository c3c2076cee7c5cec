fn main() {
    eprintln!("khfk: under construction");
    std::process::exit(1);
}
