fn main() {
    let n = 3;
    let x = 0.5;
    println!("{} {} {}", n == 3, x < 1.0, x >= 0.0);
}
