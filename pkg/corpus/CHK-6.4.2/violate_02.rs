use std::fmt;

struct Temperature(f32);

impl fmt::Display for Temperature {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} C", self.0)
    }
}

impl Temperature {
    pub fn new(v: f32) -> Self {
        Temperature(v)
    }

    pub fn fmt(&self) -> String {
        format!("{:.1}", self.0)
    }
}

fn main() {
    let t = Temperature::new(21.5);
    println!("{} {}", t, t.fmt());
}
