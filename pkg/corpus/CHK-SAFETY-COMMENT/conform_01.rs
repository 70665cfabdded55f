// Safe twin of violate_01.
fn first(v: &[u8]) -> u8 {
    v[0]
}

fn main() {
    println!("{}", first(&[4, 5]));
}
