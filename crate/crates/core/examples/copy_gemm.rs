//! Generic copy and GEMM driven entirely by layouts.

use shapestride::tensor::{copy, gemm, BufferAccessor, Tensor};
use shapestride::Layout;

fn l(s: &str) -> Layout {
    s.parse().unwrap()
}

fn main() {
    // gather
    let src = Tensor::new(BufferAccessor::new((0..256).collect::<Vec<i64>>()), l("(2,3,2):(42,1,128)"));
    let dst = Tensor::new(BufferAccessor::new(vec![0i64; 12]), l("12:1"));
    copy(&src, &dst).unwrap();
    println!("gather    {:?}", dst.accessor().snapshot());

    // transpose
    let src = Tensor::new(BufferAccessor::new((0..24).collect::<Vec<i64>>()), l("(8,3):(1,8)"));
    let dst = Tensor::new(BufferAccessor::new(vec![0i64; 24]), l("(8,3):(3,1)"));
    copy(&src, &dst).unwrap();
    println!("transpose {:?}", dst.accessor().snapshot());

    // C(m,n) += A(m,k) B(n,k), "TN" layouts
    let (m, n, k) = (3, 2, 4);
    let a = Tensor::new(BufferAccessor::new((1..=m * k).collect::<Vec<i64>>()), l("(3,4):(4,1)"));
    let b = Tensor::new(BufferAccessor::new((1..=n * k).collect::<Vec<i64>>()), l("(2,4):(4,1)"));
    let c = Tensor::new(BufferAccessor::new(vec![0i64; (m * n) as usize]), l("(3,2):(1,3)"));
    gemm(&a, &b, &c).unwrap();
    println!("gemm      {:?}", c.accessor().snapshot());
}
