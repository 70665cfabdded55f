mod mylib {
    pub mod prelude {
        pub fn greet() -> &'static str {
            "hi"
        }
    }
}

use mylib::prelude::*;

fn main() {
    println!("{}", greet());
}
