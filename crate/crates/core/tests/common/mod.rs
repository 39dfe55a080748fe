//! Brute-force references built by enumerating every alignment path.
#![allow(dead_code)]

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use tecentroid::TimeSeries;

pub type Path = Vec<(usize, usize)>;

/// All monotone unit-step paths from (1, 1) to (p, q), 1-based.
pub fn paths(p: usize, q: usize) -> Vec<Path> {
    fn walk(i: usize, j: usize, p: usize, q: usize, cur: &mut Path, out: &mut Vec<Path>) {
        cur.push((i, j));
        if (i, j) == (p, q) {
            out.push(cur.clone());
        } else {
            if i < p && j < q {
                walk(i + 1, j + 1, p, q, cur, out);
            }
            if i < p {
                walk(i + 1, j, p, q, cur, out);
            }
            if j < q {
                walk(i, j + 1, p, q, cur, out);
            }
        }
        cur.pop();
    }
    let mut out = Vec::new();
    walk(1, 1, p, q, &mut Vec::new(), &mut out);
    out
}

pub fn sq(x: &TimeSeries, y: &TimeSeries, i: usize, j: usize) -> f64 {
    x.row(i - 1)
        .iter()
        .zip(y.row(j - 1))
        .map(|(a, b)| (a - b) * (a - b))
        .sum()
}

pub fn dtw_cost(x: &TimeSeries, y: &TimeSeries) -> f64 {
    paths(x.len(), y.len())
        .iter()
        .map(|path| path.iter().map(|&(i, j)| sq(x, y, i, j)).sum::<f64>())
        .fold(f64::INFINITY, f64::min)
}

pub fn path_cost(x: &TimeSeries, y: &TimeSeries, path: &[(usize, usize)]) -> f64 {
    path.iter().map(|&(i, j)| sq(x, y, i, j)).sum()
}

fn weight(x: &TimeSeries, y: &TimeSeries, nu: f64, path: &[(usize, usize)]) -> f64 {
    path.iter()
        .map(|&(i, j)| (-nu * sq(x, y, i, j)).exp() / 3.0)
        .product()
}

/// Summed weight of the partial paths from (1, 1) to (i, j).
pub fn forward_cell(x: &TimeSeries, y: &TimeSeries, nu: f64, i: usize, j: usize) -> f64 {
    paths(i, j).iter().map(|p| weight(x, y, nu, p)).sum()
}

/// Summed weight of the complete paths that visit (i, j).
pub fn through_mass(x: &TimeSeries, y: &TimeSeries, nu: f64, i: usize, j: usize) -> f64 {
    paths(x.len(), y.len())
        .iter()
        .filter(|p| p.contains(&(i, j)))
        .map(|p| weight(x, y, nu, p))
        .sum()
}

/// Second kernel term: steps into (i, j) weigh the diagonal-pair similarity
/// at `i` (vertical) or `j` (horizontal); diagonal steps exist only on
/// `i = j`. Same-index similarities past the shorter series are 0.
fn xx_weight(x: &TimeSeries, y: &TimeSeries, nu: f64, path: &[(usize, usize)]) -> f64 {
    let shared = x.len().min(y.len());
    let same = |t: usize| {
        if t <= shared {
            (-nu * sq(x, y, t, t)).exp()
        } else {
            0.0
        }
    };
    let mut w = (-nu * sq(x, y, 1, 1)).exp() / 3.0;
    for pair in path.windows(2) {
        let ((i0, j0), (i, j)) = (pair[0], pair[1]);
        w *= match (i - i0, j - j0) {
            (1, 1) if i == j => (-nu * sq(x, y, i, j)).exp(),
            (1, 1) => 0.0,
            (1, 0) => same(i),
            _ => same(j),
        } / 3.0;
    }
    w
}

pub fn kdtw(x: &TimeSeries, y: &TimeSeries, nu: f64) -> f64 {
    paths(x.len(), y.len())
        .iter()
        .map(|p| weight(x, y, nu, p) + xx_weight(x, y, nu, p))
        .sum()
}

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn random_series(rng: &mut impl Rng, len: usize, dim: usize) -> TimeSeries {
    let data = (0..len * dim).map(|_| rng.gen_range(-1.5..1.5)).collect();
    TimeSeries::new(data, len, dim).unwrap()
}

pub fn uni(v: &[f64]) -> TimeSeries {
    TimeSeries::univariate(v.to_vec()).unwrap()
}

pub fn rel_close(a: f64, b: f64, tol: f64) -> bool {
    (a - b).abs() <= tol * a.abs().max(b.abs()).max(f64::MIN_POSITIVE)
}
