//! Splitting a layout into tiles with logical and zipped divide.

use shapestride::algebra::{logical_divide, zipped_divide};
use shapestride::cli::render_2d;
use shapestride::{Layout, Tiler};

fn main() {
    let a: Layout = "24:3".parse().unwrap();
    println!("{}", logical_divide(&a, &"8:3".parse().unwrap()).unwrap());
    let a: Layout = "(6,2,2):(2,1,20)".parse().unwrap();
    println!("{}", logical_divide(&a, &"8:3".parse().unwrap()).unwrap());

    let a: Layout = "(8,16):(20,1)".parse().unwrap();
    let t: Tiler = "[4:1,8:2]".parse().unwrap();
    let z = zipped_divide(&a, &t).unwrap();
    println!("{z}\n{}", render_2d(&z).unwrap());
}
