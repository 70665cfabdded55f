use std::marker::PhantomData;

pub struct View<'a, T> {
    start: *const T,
    len: usize,
    _life: PhantomData<&'a T>,
}

pub struct Owner {
    data: Vec<u8>,
}

pub struct Handle(*mut Owner);

fn main() {
    let o = Owner { data: vec![1] };
    let v: View<'_, u8> = View { start: o.data.as_ptr(), len: 1, _life: PhantomData };
    println!("{}", v.len + v.start.is_null() as usize);
}
