//! Composition, tilers, and partitioning data with a thread/value layout.

use shapestride::algebra::{compose, compose_by_mode};
use shapestride::{Layout, Tiler};

fn l(s: &str) -> Layout {
    s.parse().unwrap()
}

fn main() {
    println!("{}", compose(&l("(4,6,8,10):(2,3,5,7)"), &l("6:12")).unwrap());
    for b in ["6:3", "6:1"] {
        match compose(&l("(4,6,8):(2,3,5)"), &l(b)) {
            Ok(r) => println!("{r}"),
            Err(e) => println!("(4,6,8):(2,3,5) o {b}: {e}"),
        }
    }

    let t: Tiler = "[3:4,8:2]".parse().unwrap();
    println!("by mode: {}", compose_by_mode(&l("(12,(4,8)):(59,(13,1))"), &t).unwrap());

    // 32 threads, 2 values each, over an 8x8 tile
    let tv = l("((4,8),2):((16,1),8)");
    for data in ["(8,8):(1,8)", "(8,8):(8,1)", "(8,8):(1,9)", "(8,8):(f1,f9)", "(8,8):(e0,e1)"] {
        let r = compose(&l(data), &tv).unwrap();
        println!("{data:<16} thread 1 value 1 -> {}", r.eval(&"((1,0),1)".parse().unwrap()).unwrap());
    }
}
