fn step(n: u32) -> u32 {
    let step = |x: u32| x + 1;
    step(n)
}

struct Counter;

impl Counter {
    fn len(&self) -> usize {
        let v = vec![1, 2];
        v.len()
    }
}

fn main() {
    println!("{} {}", step(1), Counter.len());
}
