use std::num::ParseIntError;

fn parse(s: &str) -> Result<u32, ParseIntError> {
    let n = s.parse::<u32>()?;
    Ok(n)
}

fn main() {
    let n = parse("12").unwrap_or(0);
    let m = parse("x").unwrap_or_default();
    println!("{n} {m}");
}
