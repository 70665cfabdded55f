static GREETING: &str = "hello";
const LIMIT: u32 = 3;

fn main() {
    println!("{GREETING} {LIMIT}");
}
