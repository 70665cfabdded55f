struct Tree {
    kids: Vec<Tree>,
}

impl Tree {
    fn size(&self) -> usize {
        1 + self.kids.iter().map(|k| Tree::size(k)).sum::<usize>()
    }

    fn depth(&self) -> usize {
        self.deeper()
    }

    fn deeper(&self) -> usize {
        1 + self.kids.iter().map(|k| Tree::depth(k)).max().unwrap_or(0)
    }

    fn leaf(&self) -> bool {
        self.kids.is_empty()
    }
}

fn a(n: u8) -> u8 { if n == 0 { 0 } else { b(n - 1) } }
fn b(n: u8) -> u8 { c(n) }
fn c(n: u8) -> u8 { a(n) }
fn d(n: u8) -> u8 { a(n) + e(n) }
fn e(n: u8) -> u8 { n }
fn f(n: u8) -> u8 { g(n) }
fn g(n: u8) -> u8 { if n > 3 { f(n - 1) } else { h(n) } }
fn h(n: u8) -> u8 { e(n) }
fn i(n: u8) -> u8 { d(n) + f(n) }
fn j(n: u8) -> u8 { i(n) }

fn main() {
    let t = Tree { kids: vec![] };
    println!("{} {} {} {}", t.size(), t.depth(), t.leaf(), j(5));
}
