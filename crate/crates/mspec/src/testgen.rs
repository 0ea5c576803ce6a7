//! Random instance generators shared by the unit tests.

use rand::prelude::*;
use rand_chacha::ChaCha8Rng;

use crate::instance::Instance;

/// Random instance with integer weights in `0..=w_max` and up to `n_max`
/// intermediate vertices. Terminal pairs other than (s, t) are sampled like
/// any other pair.
pub(crate) fn random_integer_instance(rng: &mut ChaCha8Rng, n_max: usize, w_max: u64) -> Instance {
    random_instance_with(rng, n_max, |rng| rng.gen_range(0..=w_max) as f64)
}

/// Random instance with real weights in `[0, w_max)`, with an occasional
/// exact zero.
pub(crate) fn random_real_instance(rng: &mut ChaCha8Rng, n_max: usize, w_max: f64) -> Instance {
    random_instance_with(rng, n_max, |rng| {
        if rng.gen_bool(0.05) {
            0.0
        } else {
            rng.gen_range(0.0..w_max)
        }
    })
}

fn random_instance_with(
    rng: &mut ChaCha8Rng,
    n_max: usize,
    mut weight: impl FnMut(&mut ChaCha8Rng) -> f64,
) -> Instance {
    let n = rng.gen_range(1..=n_max);
    let names: Vec<String> = (0..n).map(|i| format!("v{i}")).collect();
    let mut nodes = vec!["s".to_string(), "t".to_string()];
    nodes.extend(names.iter().cloned());
    let p = rng.gen_range(0.3..0.9);
    let mut edges: Vec<(String, String, f64)> = Vec::new();
    for i in 0..nodes.len() {
        for j in (i + 1)..nodes.len() {
            if (nodes[i] == "s" && nodes[j] == "t") || !rng.gen_bool(p) {
                continue;
            }
            edges.push((nodes[i].clone(), nodes[j].clone(), weight(rng)));
        }
    }
    Instance::new(names, &edges).unwrap()
}
