//! Checking operators against the brute-force oracle on random inputs.

use rand::SeedableRng;
use shapestride::{algebra, oracle};

fn main() {
    let mut rng = rand::rngs::StdRng::seed_from_u64(1);
    let (mut agreed, mut rejected) = (0, 0);
    for _ in 0..1000 {
        let a = oracle::random_layout(&mut rng, 256);
        let b = oracle::random_factor_operand(&mut rng, &a);
        match algebra::compose(&a, &b) {
            Ok(r) => {
                let want = oracle::oracle_compose(&oracle::tabulate(&a).unwrap(), &oracle::tabulate(&b).unwrap(), &a);
                assert_eq!(oracle::tabulate(&r).unwrap(), want, "{a} o {b}");
                agreed += 1;
            }
            Err(_) => {
                assert!(!oracle::compose_representable(&a, &b));
                rejected += 1;
            }
        }
    }
    println!("compose: {agreed} agree with the oracle, {rejected} rejected");
}
