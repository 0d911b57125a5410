//! Complements: the offsets a layout misses, in increasing order.

use shapestride::algebra::{complement, complement_to, complement_with, GapRule};
use shapestride::Layout;

fn main() {
    for s in ["(4,8):(1,4)", "(4,8):(1,8)", "((2,2),(2,4)):((0,2),(0,4))", "(4,(4,2)):(e1,(e0,12e1))"] {
        let l: Layout = s.parse().unwrap();
        println!("{s:<28} * = {}", complement(&l).unwrap());
    }
    let l: Layout = "(3,4):(4,1)".parse().unwrap();
    println!("(3,4):(4,1) against 24: {}", complement_to(&l, 24).unwrap());

    // uneven gaps need the floor rule
    let l: Layout = "(4,8):(20,2)".parse().unwrap();
    println!("floor: {}", complement_with(&l, None, GapRule::Floor).unwrap());
    println!("exact: {}", complement_with(&l, None, GapRule::Exact).unwrap_err());
}
