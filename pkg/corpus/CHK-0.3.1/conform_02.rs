const EPS: f64 = 1e-9;

fn near(a: f64, b: f64) -> bool {
    (a - b).abs() < EPS
}

fn main() {
    println!("{}", near(0.1 + 0.2, 0.3));
}
