use std::collections::HashMap;

fn lookup(m: &HashMap<u8, u8>, k: u8) -> u8 {
    *m
        .get(&k)
        .expect("key present")
}

fn pending() -> u8 {
    todo!()
}

fn pick(flag: bool) -> u8 {
    match flag {
        true => 1,
        false => unreachable!("flag is always set"),
    }
}

fn main() {
    let m = HashMap::from([(1, 2)]);
    println!("{} {}", lookup(&m, 1), pick(true));
    let _ = pending;
}
