// Allocation is only flagged for crates that opt in with no_alloc.
fn main() {
    let v = vec![1, 2, 3];
    let b = Box::new(5);
    println!("{} {}", v.len(), b);
}
