mod shapes {
    pub struct Circle;
}

struct Clutter;

fn main() {
    let _c = shapes::Circle;
    let _k = Clutter;
}
