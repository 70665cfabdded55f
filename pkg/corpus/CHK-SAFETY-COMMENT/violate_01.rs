fn first(v: &[u8]) -> u8 {
    let p = v.as_ptr();
    unsafe { *p }
}

fn main() {
    println!("{}", first(&[4, 5]));
}
