fn main() {
    let s = String::from("a");
    let t = format!("{s}b");
    let u = 5.to_string();
    let w: Vec<u8> = Vec::with_capacity(4);
    println!("{s} {t} {u} {}", w.len());
}
