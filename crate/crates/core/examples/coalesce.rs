//! Coalescing flattens a layout without changing the function it computes.

use shapestride::Layout;

fn main() {
    for s in ["((2,2),4):((1,2),4)", "(2,(1,6)):(1,(6,2))", "(4,(4,2)):(4,(1,16))", "(2,2):(f1,f2)"] {
        let l: Layout = s.parse().unwrap();
        let c = l.coalesce();
        println!("{l:<24} -> {c}");
        for i in 0..l.size() {
            assert_eq!(l.eval_index(i).unwrap(), c.eval_index(i).unwrap());
        }
    }
    let l: Layout = "((2,3),(4,5)):((1,2),(6,24))".parse().unwrap();
    let profile: shapestride::IntTuple = "(1,1)".parse().unwrap();
    println!("by mode: {}", l.coalesce_by_mode(&profile).unwrap());
}
