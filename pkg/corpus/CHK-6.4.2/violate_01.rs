trait Runner {
    fn go(&self) -> u8;
}

struct Sprinter;

impl Runner for Sprinter {
    fn go(&self) -> u8 {
        1
    }
}

impl Sprinter {
    fn go(&self) -> u8 {
        2
    }
}

fn main() {
    let s = Sprinter;
    println!("{} {}", s.go(), Runner::go(&s));
}
