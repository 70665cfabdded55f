fn main() {
    println!("unpinned toolchain");
}
