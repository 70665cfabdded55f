fn main() {
    assert!(1 + 1 == 2);
    let x = 3;
    assert!(x > 0);
}
