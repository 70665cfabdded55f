// Not a crate root: top-level items are fine here.
struct Helper;

fn build() -> Helper {
    Helper
}

fn main() {
    let _ = build();
}
