#![allow(dead_code)]

use std::path::PathBuf;

use expertrank::{Corpus, CorpusFormat};

pub fn fixture_dir() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../fixtures/table1")
}

pub fn table1() -> Corpus {
    Corpus::ingest(&fixture_dir(), CorpusFormat::Csv).expect("fixture loads")
}

pub fn dense_matmul(a: &[Vec<f64>], b: &[Vec<f64>]) -> Vec<Vec<f64>> {
    let inner = b.len();
    let cols = b.first().map_or(0, Vec::len);
    a.iter()
        .map(|row| {
            (0..cols)
                .map(|j| (0..inner).map(|k| row[k] * b[k][j]).sum())
                .collect()
        })
        .collect()
}

fn normalize(v: &[f64]) -> Vec<f64> {
    let n = v.iter().map(|x| x * x).sum::<f64>().sqrt();
    if n > 1e-12 {
        v.iter().map(|x| x / n).collect()
    } else {
        v.to_vec()
    }
}

/// Dense, loop-by-loop transcription of the damped update with
/// normalization after both vectors are computed. Returns the state after
/// every iteration.
#[allow(clippy::too_many_arguments)]
pub fn dense_cohits(
    m: &[Vec<f64>],
    c_x: &[f64],
    c_d: &[f64],
    a0: &[f64],
    h0: &[f64],
    lambda_x: f64,
    lambda_d: f64,
    k: usize,
) -> Vec<(Vec<f64>, Vec<f64>)> {
    let n = m.len();
    let mut a = a0.to_vec();
    let mut h = h0.to_vec();
    let mut history = Vec::with_capacity(k);
    for _ in 0..k {
        let mut a_next = vec![0.0; n];
        for j in 0..n {
            let mut pulled = 0.0;
            for i in 0..n {
                pulled += m[i][j] * h[i];
            }
            a_next[j] = (1.0 - lambda_x) * a[j] + lambda_x * (pulled / c_d[j]);
        }
        let mut h_next = vec![0.0; n];
        for i in 0..n {
            let mut pushed = 0.0;
            for j in 0..n {
                pushed += m[i][j] * a_next[j];
            }
            h_next[i] = (1.0 - lambda_d) * h[i] + lambda_d * (pushed / c_x[i]);
        }
        a = normalize(&a_next);
        h = normalize(&h_next);
        history.push((a.clone(), h.clone()));
    }
    history
}

pub fn assert_close(actual: &[f64], expected: &[f64], eps: f64, what: &str) {
    assert_eq!(actual.len(), expected.len(), "{what}: length");
    for (i, (a, e)) in actual.iter().zip(expected).enumerate() {
        assert!((a - e).abs() <= eps, "{what}[{i}]: {a} vs {e} (eps {eps})");
    }
}
