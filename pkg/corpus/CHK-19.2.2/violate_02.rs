use std::{fmt::*, io};

mod inner {
    pub fn one() -> u8 {
        1
    }
}

use self::inner::*;

fn main() {
    let _ = io::stdout();
    let _ = one();
    let _: Option<&dyn Debug> = None;
}
