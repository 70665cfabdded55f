fn double(n: u32) -> u32 {
    n * 2
}

fn main() {
    println!("{}", double(2));
}

#[test]
fn doubles() {
    assert_eq!("4".parse::<u32>().unwrap(), double(2));
}
