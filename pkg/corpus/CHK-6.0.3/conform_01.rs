#![allow(dead_code)]

mod shapes {
    pub struct Square;
}

use shapes::Square;

const SIDES: u32 = 4;

fn main() {
    let _s = Square;
    println!("{SIDES}");
}
