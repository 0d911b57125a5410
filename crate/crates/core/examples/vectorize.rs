//! How many elements two layouts can move as one contiguous vector.

use shapestride::analysis::{common_sublayout, max_common_vector};
use shapestride::Layout;

fn main() {
    let pairs = [
        ("(4,4):(1,4)", "((2,2),4):((1,8),2)"),
        ("((2,2),(2,2)):((8,2),(4,1))", "((2,2),(2,2)):((4,2),(8,1))"),
        ("(4,4):(4,1)", "(4,4):(1,4)"),
    ];
    for (a, b) in pairs {
        let (a, b): (Layout, Layout) = (a.parse().unwrap(), b.parse().unwrap());
        let k = max_common_vector(&a, &b).unwrap();
        let sub = common_sublayout(&a, &b).unwrap();
        let coords: Vec<i64> = (0..sub.size()).map(|i| sub.eval_int(i).unwrap()).collect();
        println!("K = {k:<2} coordinates {coords:?}");
    }
}
