trait Runner {
    fn go(&self) -> u8;
}

struct Walker;

impl Runner for Walker {
    fn go(&self) -> u8 {
        1
    }
}

impl Walker {
    fn stroll(&self) -> u8 {
        self.go() + 1
    }
}

fn main() {
    println!("{}", Walker.stroll());
}
