#[mytool::trace]
fn traced() {}

fn main() {
    traced();
}
