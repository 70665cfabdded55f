fn main() {
    let a = 0.1 + 0.2;
    if a == 0.3 {
        println!("equal");
    }
}
