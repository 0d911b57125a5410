//! Right and left inverses for integer, coordinate and xor strides.

use shapestride::algebra::{left_inverse, right_inverse};
use shapestride::{oracle, Layout};

fn main() {
    for s in ["(4,8):(8,1)", "(4,8):(1,5)", "(3,7,5):(5,15,1)", "(4,(4,2)):(e1,(e0,6e1))", "(4,(4,3)):(f1,(f5,f16))"] {
        let l: Layout = s.parse().unwrap();
        let r = right_inverse(&l).unwrap();
        let li = left_inverse(&l).unwrap();
        println!("{s:<26} right {r:<20} left {li}");
        assert!(oracle::right_inverse_check(&l, &r));
        assert!(oracle::left_inverse_check(&l, &li));
    }
    // strides that do not nest fall back to a mixed-radix search
    let l: Layout = "(2,4):(3,7)".parse().unwrap();
    println!("(2,4):(3,7) left {}", left_inverse(&l).unwrap());
}
