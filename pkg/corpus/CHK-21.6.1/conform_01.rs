fn sum(xs: &[u32; 4]) -> u32 {
    xs.iter().sum()
}

fn main() {
    let xs = [1, 2, 3, 4];
    let total = sum(&xs);
    println!("{total}");
}
