//! Logical, blocked and raked products, rendered as grids.

use shapestride::algebra::{blocked_product, logical_product, raked_product};
use shapestride::cli::render_2d;
use shapestride::Layout;

fn main() {
    let a: Layout = "(3,4):(4,1)".parse().unwrap();
    let b: Layout = "(2,5):(1,2)".parse().unwrap();
    println!("logical {}", logical_product(&a, &b).unwrap());
    for (name, p) in [("blocked", blocked_product(&a, &b)), ("raked", raked_product(&a, &b))] {
        let p = p.unwrap();
        println!("{name} {p}\n{}", render_2d(&p).unwrap());
    }
}
