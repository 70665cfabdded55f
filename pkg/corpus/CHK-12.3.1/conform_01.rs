enum Value {
    Int(u32),
    Float(f32),
}

fn describe(v: &Value) -> String {
    match v {
        Value::Int(i) => format!("int {i}"),
        Value::Float(f) => format!("float {f}"),
    }
}

fn main() {
    println!("{}", describe(&Value::Int(3)));
}
