use std::collections::HashMap;

use nalgebra::DMatrix;
use num_complex::Complex64 as C64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rmdc::clifford::{enumerate_cliffords, sample_uniform_clifford, CliffordTableau};
use rmdc::experiments::summarize;
use rmdc::fold::FoldState4;
use rmdc::rep::{haar_fold_channel, permutation_operator, q_operator, weingarten_clifford, Permutation};
use rmdc::state::PureState;

const SAMPLES: usize = 10_000;

fn within_3se(values: &[f64], target: f64) -> (bool, f64, f64) {
    let s = summarize(values).unwrap();
    ((s.mean - target).abs() <= 3.0 * s.std_error_mean + 1e-12, s.mean, s.std_error_mean)
}

fn sampled_states(n: usize, samples: usize, seed: u64) -> Vec<Vec<C64>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..samples)
        .map(|_| {
            let mut s = PureState::zero(n);
            s.conjugate_by_circuit(&sample_uniform_clifford(n, &mut rng).unwrap().to_gates().unwrap()).unwrap();
            s.amplitudes().to_vec()
        })
        .collect()
}

#[test]
fn each_single_qubit_action_appears_at_its_expected_rate() {
    let all = enumerate_cliffords(1).unwrap();
    let index: HashMap<CliffordTableau, usize> = all.iter().cloned().enumerate().map(|(i, c)| (c, i)).collect();
    let mut counts = [0usize; 24];
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    for _ in 0..24_000 {
        counts[index[&sample_uniform_clifford(1, &mut rng).unwrap()]] += 1;
    }
    let band = 3.0 * 1000f64.sqrt();
    for (i, &c) in counts.iter().enumerate() {
        assert!((c as f64 - 1000.0).abs() <= band, "action {i} drawn {c} times");
    }
}

#[test]
fn sampled_single_qubit_second_moment_channel_is_haar() {
    let ts: Vec<DMatrix<C64>> = Permutation::all(2).iter().map(|p| permutation_operator(p, 2)).collect();
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let unitaries: Vec<DMatrix<C64>> = (0..SAMPLES)
        .map(|_| {
            let u = DMatrix::from_row_slice(2, 2, &sample_uniform_clifford(1, &mut rng).unwrap().unitary().unwrap());
            u.kronecker(&u)
        })
        .collect();
    // Inputs: a product state and an operator with coherences across the copies.
    for (i, j) in [(0usize, 0usize), (1, 2)] {
        let mut e = DMatrix::<C64>::zeros(4, 4);
        e[(i, j)] = C64::new(1.0, 0.0);
        let traces: Vec<f64> = ts.iter().map(|t| (&e * t).trace().re).collect();
        let a = haar_fold_channel(&traces, 2, 2).unwrap();
        let haar = ts.iter().zip(&a).fold(DMatrix::<C64>::zeros(4, 4), |acc, (t, c)| acc + t * C64::new(*c, 0.0));
        let images: Vec<DMatrix<C64>> = unitaries.iter().map(|uu| uu * &e * uu.adjoint()).collect();
        for r in 0..4 {
            for c in 0..4 {
                for part in [|z: C64| z.re, |z: C64| z.im] {
                    let column: Vec<f64> = images.iter().map(|m| part(m[(r, c)])).collect();
                    let (ok, mean, se) = within_3se(&column, part(haar[(r, c)]));
                    assert!(ok, "input ({i},{j}) entry ({r},{c}): {mean} ± {se} vs {}", part(haar[(r, c)]));
                }
            }
        }
    }
}

#[test]
fn sampled_two_copy_average_matches_the_haar_formula() {
    let (n, d) = (3usize, 8usize);
    let states = sampled_states(n, SAMPLES, 8);
    let norm = 1.0 / (d * (d + 1)) as f64;
    // Entries ⟨x y|E ψ^{⊗2}|u v⟩ and their Haar values (δ_xu δ_yv + δ_xv δ_yu)/(d(d+1)).
    let cases: [((usize, usize), (usize, usize)); 5] =
        [((0, 0), (0, 0)), ((5, 5), (5, 5)), ((0, 5), (0, 5)), ((0, 5), (5, 0)), ((1, 2), (3, 4))];
    for ((x, y), (u, v)) in cases {
        let target = norm * ((x == u && y == v) as u8 as f64 + (x == v && y == u) as u8 as f64);
        let entries: Vec<C64> = states.iter().map(|s| s[x] * s[y] * (s[u] * s[v]).conj()).collect();
        let re: Vec<f64> = entries.iter().map(|z| z.re).collect();
        let im: Vec<f64> = entries.iter().map(|z| z.im).collect();
        for (column, t) in [(re, target), (im, 0.0)] {
            let (ok, mean, se) = within_3se(&column, t);
            assert!(ok, "entry ({x}{y},{u}{v}): {mean} ± {se} vs {t}");
        }
    }
}

#[test]
fn four_copy_clifford_twirl_matches_sampled_average_at_d4() {
    let (n, d) = (2usize, 4usize);
    let tables = weingarten_clifford(d as u64).unwrap();
    let fold = FoldState4::stabilizer(d as u64).unwrap();
    let q = q_operator(n).unwrap();
    let ts: Vec<DMatrix<C64>> = Permutation::all(4).iter().map(|p| permutation_operator(p, d)).collect();
    let mut twirl = DMatrix::<C64>::zeros(d.pow(4), d.pow(4));
    for (r, t) in ts.iter().enumerate() {
        twirl += (&q * t) * C64::new(fold.c[r], 0.0) + t * C64::new(fold.b[r], 0.0);
    }
    assert!((twirl.trace().re - 1.0).abs() < 1e-12);
    assert!((fold.trace(&tables) - 1.0).abs() < 1e-12);

    let states = sampled_states(n, SAMPLES, 9);
    let index = |digits: [usize; 4]| digits.iter().rev().fold(0, |acc, &x| acc * d + x);
    let cases = [
        ([0, 0, 0, 0], [0, 0, 0, 0]),
        ([0, 0, 1, 1], [0, 0, 1, 1]),
        ([0, 1, 2, 3], [0, 1, 2, 3]),
        ([0, 0, 3, 3], [1, 1, 2, 2]),
        ([0, 1, 2, 3], [1, 0, 3, 2]),
    ];
    for (i, j) in cases {
        let exact = twirl[(index(i), index(j))];
        let entries: Vec<C64> =
            states.iter().map(|s| (0..4).map(|k| s[i[k]] * s[j[k]].conj()).product::<C64>()).collect();
        for part in [|z: C64| z.re, |z: C64| z.im] {
            let column: Vec<f64> = entries.iter().map(|&z| part(z)).collect();
            let (ok, mean, se) = within_3se(&column, part(exact));
            assert!(ok, "entry {i:?},{j:?}: {mean} ± {se} vs {}", part(exact));
        }
    }
}
