#[derive(Debug)]
struct Sample(u8);

#[mytool::trace]
fn traced() {}

#[unsafe(inline)]
fn fast() {}

fn main() {
    traced();
    fast();
    println!("{:?}", Sample(1));
}
