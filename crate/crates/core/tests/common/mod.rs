//! Random exact inputs for the integration tests.
#![allow(dead_code)]

use cr_algebraicity::linalg::Matrix;
use cr_algebraicity::manifold::DefiningSystem;
use cr_algebraicity::poly::{MultiPolynomial, Table, VariableTable};
use cr_algebraicity::GaussianRational as GR;
use num_traits::Zero;
use rand::Rng;
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    rand::SeedableRng::seed_from_u64(seed)
}

/// `a/b + c/d·i` with numerators in `-9..=9`, denominators in `1..=9`.
pub fn small(r: &mut ChaCha8Rng) -> GR {
    GR::from_parts(r.gen_range(-9..=9), r.gen_range(1..=9), r.gen_range(-9..=9), r.gen_range(1..=9))
}

pub fn small_real(r: &mut ChaCha8Rng) -> GR {
    GR::from_ratio(r.gen_range(-9..=9), r.gen_range(1..=9))
}

pub fn nonzero(r: &mut ChaCha8Rng) -> GR {
    loop {
        let c = small(r);
        if !c.is_zero() {
            return c;
        }
    }
}

pub fn point(r: &mut ChaCha8Rng, n: usize) -> Vec<GR> {
    (0..n).map(|_| small(r)).collect()
}

/// Exponents over `z1..zn, zb1..zbn` with total degree in `2..=max_deg`.
fn random_exps(r: &mut ChaCha8Rng, n: usize, max_deg: u32) -> Vec<u32> {
    let deg = r.gen_range(2..=max_deg);
    let mut e = vec![0u32; 2 * n];
    for _ in 0..deg {
        e[r.gen_range(0..2 * n)] += 1;
    }
    e
}

fn swap(e: &[u32], n: usize) -> Vec<u32> {
    e[n..].iter().chain(&e[..n]).copied().collect()
}

fn y_degree(e: &[u32], n: usize, k: usize) -> u32 {
    (k..n).map(|i| e[i] + e[n + i]).sum()
}

/// Normalized generic system `z_{k+j} + zb_{k+j} + h_j`, `h_j` real of
/// degree 2..=3. With `y_affine`, every monomial of `h_j` has degree at most
/// one in `z_{k+1}.., zb_{k+1}..` jointly, so rational points can be solved for.
pub fn random_system(r: &mut ChaCha8Rng, n: usize, d: usize, y_affine: bool) -> DefiningSystem {
    let k = n - d;
    let t = VariableTable::complex(n);
    let rho = (0..d)
        .map(|j| {
            let mut terms: Vec<(Vec<u32>, GR)> = Vec::new();
            for i in [k + j, n + k + j] {
                let mut e = vec![0; 2 * n];
                e[i] = 1;
                terms.push((e, GR::from_int(1)));
            }
            let count = r.gen_range(1..=4);
            let mut added = 0;
            while added < count {
                let e = random_exps(r, n, 3);
                if y_affine && y_degree(&e, n, k) > 1 {
                    continue;
                }
                let c = nonzero(r);
                terms.push((swap(&e, n), c.conj()));
                terms.push((e, c));
                added += 1;
            }
            MultiPolynomial::from_terms(&t, terms).unwrap()
        })
        .collect();
    DefiningSystem::new(n, rho).unwrap()
}

/// Dimensions `(n, d)` with `n ≤ 4`, `d ≤ 2`, `k ≥ 1`.
pub fn random_dims(r: &mut ChaCha8Rng) -> (usize, usize) {
    let n = r.gen_range(2..=4);
    let d = r.gen_range(1..=2.min(n - 1));
    (n, d)
}

/// Solves the affine system `eqs(s) = 0` in the table's variables.
pub fn solve_affine(eqs: &[MultiPolynomial], st: &Table) -> Option<Vec<GR>> {
    let d = st.len();
    if eqs.iter().any(|e| e.total_degree() > 1) {
        return None;
    }
    let unit = |j: usize| -> Vec<u32> { (0..d).map(|i| u32::from(i == j)).collect() };
    let rows: Vec<Vec<GR>> = eqs.iter().map(|e| (0..d).map(|j| e.coeff(&unit(j))).collect()).collect();
    let rhs: Vec<GR> = eqs.iter().map(|e| -e.constant_term()).collect();
    Matrix::from_rows(rows).solve(&rhs)
}

/// `a == c·b` for some nonzero scalar `c`.
pub fn proportional(a: &MultiPolynomial, b: &MultiPolynomial) -> bool {
    let Some((m, cb)) = b.terms().next() else { return a.is_zero() };
    let ca = a.coeff(m.exps());
    if ca.is_zero() {
        return false;
    }
    let ratio = &ca * &cb.inv().unwrap();
    *a == b.scale(&ratio)
}

pub fn problems_dir() -> std::path::PathBuf {
    std::path::Path::new(env!("CARGO_MANIFEST_DIR")).join("../../problems")
}
