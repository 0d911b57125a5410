//! Locating the coordinates of requested offsets with a left inverse.

use shapestride::analysis::locate_offsets;
use shapestride::Layout;

fn main() {
    let a: Layout = "(128,512):(16384,1)".parse().unwrap();
    let t: Layout = "(1,128):(1,16384)".parse().unwrap();
    println!("{}", locate_offsets(&a, &t).unwrap());
    let a: Layout = "(4,8):(1,5)".parse().unwrap();
    println!("{}", locate_offsets(&a, &"8:1".parse().unwrap()).unwrap_err());
}
