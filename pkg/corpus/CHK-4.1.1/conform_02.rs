fn main() {
    println!("default toolchain");
}
