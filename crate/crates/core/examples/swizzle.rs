//! An xor-swizzled 8x8 tile: each row touches all eight banks.

use shapestride::cli::render_2d;
use shapestride::Layout;

fn main() {
    let l: Layout = "(8,8):(f1,f9)".parse().unwrap();
    print!("{}", render_2d(&l).unwrap());
    for r in 0..8 {
        let mut row: Vec<u64> = (0..8).map(|c| l.eval_index(r + 8 * c).unwrap().as_xor().unwrap() % 8).collect();
        row.sort();
        assert_eq!(row, (0..8).collect::<Vec<_>>());
    }
}
