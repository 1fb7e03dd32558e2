use std::collections::HashMap;

use treelaws::discretesnake::{
    enumerate_plane_trees, exact_mean_zero_count, sample_plane_tree, sample_stats,
};
use treelaws::harness::stats::{chi_square_uniform, mean_se};
use treelaws::RngStream;

const DRAWS: usize = 1_000_000;
const MIN_P: f64 = 1e-3;

fn catalan(n: u64) -> u64 {
    (0..n).fold(1u64, |c, k| c * 2 * (2 * k + 1) / (k + 2))
}

#[test]
fn sampled_trees_are_uniform() {
    for n in [3usize, 5, 8] {
        let all = enumerate_plane_trees(n).unwrap();
        assert_eq!(all.len() as u64, catalan(n as u64));
        let index: HashMap<u64, usize> = all
            .iter()
            .enumerate()
            .map(|(i, t)| (t.dyck_code(), i))
            .collect();
        let mut counts = vec![0u64; all.len()];
        let mut rng = RngStream::new(5, n as u64);
        for _ in 0..DRAWS {
            let t = sample_plane_tree(n, &mut rng).unwrap();
            counts[index[&t.dyck_code()]] += 1;
        }
        let (stat, p) = chi_square_uniform(&counts).unwrap();
        assert!(p > MIN_P, "n={n}: chi-square {stat:.1}, p = {p:.2e}");
    }
}

// brute force over all trees and all label increments
fn brute_mean_zero_count(n: usize) -> f64 {
    let trees = enumerate_plane_trees(n).unwrap();
    let mut total = 0f64;
    for t in &trees {
        let combos = 3usize.pow(n as u32);
        let mut zeros = 0usize;
        for c in 0..combos {
            let mut incr = Vec::with_capacity(n);
            let mut x = c;
            for _ in 0..n {
                incr.push((x % 3) as i64 - 1);
                x /= 3;
            }
            // vertex v > 0 takes increment v - 1 on the edge to its parent
            let mut label = vec![0i64; n + 1];
            for v in 1..=n {
                label[v] = label[t.parent(v)] + incr[v - 1];
            }
            zeros += label.iter().filter(|&&l| l == 0).count();
        }
        total += zeros as f64 / combos as f64;
    }
    total / trees.len() as f64
}

#[test]
fn exact_zero_count_means() {
    for n in 1..=4 {
        let (num, den) = exact_mean_zero_count(n).unwrap();
        let exact = num as f64 / den as f64;
        assert!((exact - brute_mean_zero_count(n)).abs() < 1e-12, "n={n}");
        let rng = RngStream::new(9, n as u64);
        let m = mean_se((0..200_000u64).map(|i| {
            sample_stats(n, &mut rng.substream(i)).unwrap().zero_count as f64
        }))
        .unwrap();
        assert!(
            (m.mean - exact).abs() <= 4.0 * m.se,
            "n={n}: {} vs {exact}",
            m.mean
        );
    }
}
