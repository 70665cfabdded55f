fn parse(s: &str) -> u32 {
    s.parse::<u32>().unwrap()
}

fn check(n: u32) {
    if n > 100 {
        panic!("too large: {n}");
    }
}

fn main() {
    check(parse("7"));
}
