const SIZE: usize = 8;

fn main() {
    assert_eq!(4 * 2, 8);
    assert_ne!(0x10, 15, "hex differs");
    assert!(SIZE > 0);
    assert!(!false);
}
