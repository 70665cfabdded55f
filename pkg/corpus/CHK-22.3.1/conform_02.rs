const _: () = assert!(2 > 1);

static CHECKED: () = assert!(u8::MAX == 255);

fn main() {
    let v = vec![1, 2];
    assert!(v.len() == 2);
    let _ = CHECKED;
}
