use std::fmt;
use std::io::{self, Write};

struct Name;

impl fmt::Display for Name {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "name")
    }
}

fn main() {
    let mut out = io::stdout();
    let _ = writeln!(out, "{}", Name);
}
