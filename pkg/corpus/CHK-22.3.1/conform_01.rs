const SIZE: usize = 16;

fn main() {
    const { assert!(SIZE > 0) };
    let n = std::env::args().count();
    assert!(n >= 1);
    assert_eq!(n, n, "reflexive {}", 1 + 1);
}
