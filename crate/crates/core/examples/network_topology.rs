//! Shape of the k-nearest communication graph on a random swarm: how
//! in-degree spreads out and how many links are reciprocated.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use swarmtrack::network::k_nearest;
use swarmtrack::Vec2;

fn main() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let n = 50;
    let positions: Vec<Vec2> = (0..n)
        .map(|_| Vec2::new(rng.gen_range(0.0..25.0), rng.gen_range(0.0..25.0)))
        .collect();

    println!(
        "{:>3} {:>8} {:>8} {:>10}",
        "k", "min_in", "max_in", "mutual"
    );
    for k in [2, 5, 10, 20, 49] {
        let table = k_nearest(&positions, k).expect("valid degree");
        let mut in_degree = vec![0usize; n];
        let mut mutual = 0;
        for (i, row) in table.rows().enumerate() {
            for &j in row {
                in_degree[j] += 1;
                if table.neighbors(j).contains(&i) {
                    mutual += 1;
                }
            }
        }
        let links = n * k;
        println!(
            "{k:>3} {:>8} {:>8} {:>9.1}%",
            in_degree.iter().min().unwrap(),
            in_degree.iter().max().unwrap(),
            100.0 * mutual as f64 / links as f64
        );
    }
}
