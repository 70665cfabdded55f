struct Counter {
    n: u32,
}

impl Counter {
    fn go(&mut self) {
        self.n += 1;
    }
}

fn main() {
    let mut c = Counter { n: 0 };
    c.go();
    println!("{}", c.n);
}
