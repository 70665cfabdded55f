// `union` is only a keyword in item position
fn main() {
    let union = 3;
    let total = union + 1;
    println!("{total}");
}
