//! Colex coordinate tables for a few shapes.

use shapestride::inttuple::{crd2idx, idx2crd};
use shapestride::IntTuple;

fn main() {
    let shapes: Vec<IntTuple> = ["12", "(6,2)", "((2,3),2)"].iter().map(|s| s.parse().unwrap()).collect();
    println!("{:>4} {:>8} {:>12}", "i", "(6,2)", "((2,3),2)");
    for i in 0..12 {
        let row: Vec<String> = shapes.iter().map(|s| idx2crd(i, s).to_string()).collect();
        println!("{:>4} {:>8} {:>12}", row[0], row[1], row[2]);
        assert_eq!(crd2idx(&idx2crd(i, &shapes[2]), &shapes[2]).unwrap(), i);
    }
}
