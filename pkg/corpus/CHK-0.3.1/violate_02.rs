fn is_unit(x: f64) -> bool {
    x != 1.0
}

fn main() {
    let y: f32 = -0.5;
    let z = 2.5f32;
    println!("{} {}", is_unit(2.0), y == z);
    println!("{}", -1.5 == f64::from(y));
}
