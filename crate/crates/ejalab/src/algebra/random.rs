//! Seeded random elements, frames, and orthogonal/unitary matrices.
//!
//! Everything is deterministic given a seed. Independent streams are
//! derived from (seed, label, index) so trials are reproducible in
//! isolation.

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::{Algebra, AlgebraSpec, Element, OrderedJordanFrame};
use crate::error::Result;

/// Deterministic sub-stream derivation (splitmix64-style mixing).
pub fn derive_seed(seed: u64, label: &str, index: u64) -> u64 {
    let mut z = seed ^ 0x9e37_79b9_7f4a_7c15;
    for b in label.bytes() {
        z = mix(z ^ b as u64);
    }
    mix(z ^ index)
}

fn mix(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

pub fn rng_for(seed: u64, label: &str, index: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(derive_seed(seed, label, index))
}

/// Standard normal via Box–Muller.
pub fn gauss(rng: &mut impl Rng) -> f64 {
    loop {
        let u1: f64 = rng.gen::<f64>();
        if u1 <= f64::MIN_POSITIVE {
            continue;
        }
        let u2: f64 = rng.gen::<f64>();
        return (-2.0 * u1.ln()).sqrt() * (2.0 * std::f64::consts::PI * u2).cos();
    }
}

/// Element with iid standard-normal orthonormal coordinates.
pub fn random_element(alg: &Algebra, rng: &mut impl Rng) -> Element {
    let coords = (0..alg.dim()).map(|_| gauss(rng)).collect();
    alg.element(coords).expect("gaussian coords are finite")
}

/// Random n×n orthogonal matrix (row-major) by Gram–Schmidt on a Gaussian.
pub fn random_orthogonal(n: usize, rng: &mut impl Rng) -> Vec<f64> {
    loop {
        let mut m: Vec<f64> = (0..n * n).map(|_| gauss(rng)).collect();
        if gram_schmidt_real(n, &mut m) {
            return m;
        }
    }
}

fn gram_schmidt_real(n: usize, m: &mut [f64]) -> bool {
    for j in 0..n {
        for k in 0..j {
            let mut p = 0.0;
            for i in 0..n {
                p += m[i * n + k] * m[i * n + j];
            }
            for i in 0..n {
                m[i * n + j] -= p * m[i * n + k];
            }
        }
        let mut nrm = 0.0;
        for i in 0..n {
            nrm += m[i * n + j] * m[i * n + j];
        }
        let nrm = nrm.sqrt();
        if nrm < 1e-8 {
            return false;
        }
        for i in 0..n {
            m[i * n + j] /= nrm;
        }
    }
    true
}

/// Random n×n unitary matrix (row-major) by Gram–Schmidt on a complex Gaussian.
pub fn random_unitary(n: usize, rng: &mut impl Rng) -> Vec<Complex64> {
    loop {
        let mut m: Vec<Complex64> = (0..n * n)
            .map(|_| Complex64::new(gauss(rng), gauss(rng)))
            .collect();
        if gram_schmidt_complex(n, &mut m) {
            return m;
        }
    }
}

fn gram_schmidt_complex(n: usize, m: &mut [Complex64]) -> bool {
    for j in 0..n {
        for k in 0..j {
            let mut p = Complex64::new(0.0, 0.0);
            for i in 0..n {
                p += m[i * n + k].conj() * m[i * n + j];
            }
            for i in 0..n {
                let v = m[i * n + k];
                m[i * n + j] -= p * v;
            }
        }
        let mut nrm = 0.0;
        for i in 0..n {
            nrm += m[i * n + j].norm_sqr();
        }
        let nrm = nrm.sqrt();
        if nrm < 1e-8 {
            return false;
        }
        for i in 0..n {
            m[i * n + j] /= nrm;
        }
    }
    true
}

/// Random ordered Jordan frame: the canonical frame conjugated by a random
/// orthogonal/unitary map (matrix kinds), a random unit direction (spin),
/// a random permutation (RealVec), and factor-wise for products.
pub fn random_frame(alg: &Algebra, rng: &mut impl Rng) -> Result<OrderedJordanFrame> {
    let idempotents = frame_coords(alg.spec(), rng)
        .into_iter()
        .map(|c| alg.element(c))
        .collect::<Result<Vec<_>>>()?;
    Ok(OrderedJordanFrame::from_parts(idempotents))
}

fn frame_coords(spec: &AlgebraSpec, rng: &mut impl Rng) -> Vec<Vec<f64>> {
    match spec {
        AlgebraSpec::RealVec { n } => {
            let mut idx: Vec<usize> = (0..*n).collect();
            // Fisher–Yates
            for i in (1..*n).rev() {
                let j = rng.gen_range(0..=i);
                idx.swap(i, j);
            }
            idx.into_iter()
                .map(|i| {
                    let mut e = vec![0.0; *n];
                    e[i] = 1.0;
                    e
                })
                .collect()
        }
        AlgebraSpec::Sym { n } => {
            let u = random_orthogonal(*n, rng);
            (0..*n)
                .map(|k| {
                    let mut p = vec![0.0; n * n];
                    for i in 0..*n {
                        for j in 0..*n {
                            p[i * n + j] = u[i * n + k] * u[j * n + k];
                        }
                    }
                    super::sym_mat_to_coords(*n, &p)
                })
                .collect()
        }
        AlgebraSpec::Herm { n } => {
            let u = random_unitary(*n, rng);
            (0..*n)
                .map(|k| {
                    let mut p = vec![Complex64::new(0.0, 0.0); n * n];
                    for i in 0..*n {
                        for j in 0..*n {
                            p[i * n + j] = u[i * n + k] * u[j * n + k].conj();
                        }
                    }
                    super::herm_mat_to_coords(*n, &p)
                })
                .collect()
        }
        AlgebraSpec::Spin { d } => {
            let u: Vec<f64> = (0..d - 1).map(|_| gauss(rng)).collect();
            let nrm = u.iter().map(|x| x * x).sum::<f64>().sqrt();
            let u: Vec<f64> = if nrm < 1e-12 {
                let mut v = vec![0.0; d - 1];
                v[0] = 1.0;
                v
            } else {
                u.into_iter().map(|x| x / nrm).collect()
            };
            let s = std::f64::consts::SQRT_2;
            let mut plus = vec![0.0; *d];
            let mut minus = vec![0.0; *d];
            plus[0] = 1.0 / s;
            minus[0] = 1.0 / s;
            for k in 1..*d {
                plus[k] = u[k - 1] / s;
                minus[k] = -u[k - 1] / s;
            }
            vec![plus, minus]
        }
        AlgebraSpec::Product { factors } => {
            let dim = spec.dim();
            let mut out = Vec::new();
            let mut off = 0;
            for f in factors {
                let d = f.dim();
                for sub in frame_coords(f, rng) {
                    let mut emb = vec![0.0; dim];
                    emb[off..off + d].copy_from_slice(&sub);
                    out.push(emb);
                }
                off += d;
            }
            out
        }
    }
}

/// Element built from a random frame and a sorted-decreasing Gaussian
/// coefficient vector; convenient for constructing strongly commuting pairs.
pub fn random_element_with_frame(
    alg: &Algebra,
    rng: &mut impl Rng,
) -> Result<(Element, OrderedJordanFrame, Vec<f64>)> {
    let frame = random_frame(alg, rng)?;
    let mut q: Vec<f64> = (0..alg.rank()).map(|_| gauss(rng)).collect();
    q.sort_by(|a, b| b.partial_cmp(a).unwrap());
    let x = frame.recompose(&q)?;
    Ok((x, frame, q))
}
