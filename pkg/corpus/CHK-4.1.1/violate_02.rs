fn main() {
    println!("no toolchain recorded");
}
