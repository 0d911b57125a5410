//! Any function on Z_N with f(0) = 0 is a chain of composed layouts.

use rand::{Rng, SeedableRng};
use shapestride::analysis::{chain_eval, function_to_chain};

fn main() {
    let mut rng = rand::rngs::StdRng::seed_from_u64(7);
    let f: Vec<i64> = (0..10).map(|i| if i == 0 { 0 } else { rng.gen_range(0..50) }).collect();
    let chain = function_to_chain(&f).unwrap();
    let text: Vec<String> = chain.iter().map(|l| l.to_string()).collect();
    println!("f     = {f:?}\nchain = {}", text.join(" ∘ "));
    let back: Vec<i64> = (0..f.len() as i64).map(|i| chain_eval(&chain, i).unwrap()).collect();
    assert_eq!(back, f);
}
