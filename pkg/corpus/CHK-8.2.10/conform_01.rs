fn one() -> u32 {
    two() + 1
}

fn two() -> u32 {
    three() + 1
}

fn three() -> u32 {
    1
}

fn main() {
    println!("{}", one());
}
