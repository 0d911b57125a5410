//! Layouts as linear maps on their flattened coordinates.

use shapestride::analysis::linear_form;
use shapestride::Layout;

fn main() {
    for s in ["((2,2),(4,2)):((1,8),(2,16))", "(4,(4,2)):(e1,(e0,6e1))", "(4,4):(f1,f5)"] {
        let l: Layout = s.parse().unwrap();
        println!("{s:<30} {}", linear_form(&l).unwrap());
    }
}
