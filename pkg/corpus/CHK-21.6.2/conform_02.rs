struct Owned {
    data: Vec<u8>,
    name: String,
    next: Option<Box<Owned>>,
}

fn main() {
    let o = Owned { data: vec![], name: String::new(), next: None };
    println!("{} {} {}", o.data.len(), o.name, o.next.is_none());
}
