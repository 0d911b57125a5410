//! Slicing a tensor folds fixed coordinates into the accessor.

use shapestride::tensor::{CountingAccessor, Tensor};

fn main() {
    let t = Tensor::new(CountingAccessor::new(0), "((3,2),((2,3),2)):((4,1),((2,15),100))".parse().unwrap());
    for sc in ["(2,_)", "(_,5)", "(2,((0,_),_))", "((_,1),(_,0))", "((_,0),((0,_),1))", "((1,_),((_,0),_))"] {
        let s = t.slice(&sc.parse().unwrap()).unwrap();
        println!("A{sc:<20} = {s}");
    }
}
