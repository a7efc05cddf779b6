//! Seeded sampling primitives shared by scenario generators and the free
//! operation sampler. Everything is deterministic under a fixed seed.

use alloc::vec::Vec;

// Load-bearing on targets without std's inherent f64 math methods.
#[allow(unused_imports)]
use num_traits::Float;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::linalg::{Complex64, ComplexMatrix};

/// The crate-wide reproducible generator.
pub fn rng_from_seed(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Standard normal via Box–Muller.
pub fn standard_normal(rng: &mut impl Rng) -> f64 {
    let u1: f64 = rng.gen::<f64>().max(f64::MIN_POSITIVE);
    let u2: f64 = rng.gen();
    (-2.0 * u1.ln()).sqrt() * (core::f64::consts::TAU * u2).cos()
}

pub fn standard_complex(rng: &mut impl Rng) -> Complex64 {
    Complex64::new(standard_normal(rng), standard_normal(rng))
}

/// Square matrix of iid standard complex Gaussians.
pub fn ginibre(dim: usize, rng: &mut impl Rng) -> ComplexMatrix {
    ComplexMatrix::from_fn(dim, |_, _| standard_complex(rng))
}

/// Random density matrix `GG† / Tr(GG†)`; full rank almost surely.
pub fn random_density(dim: usize, rng: &mut impl Rng) -> ComplexMatrix {
    let g = ginibre(dim, rng);
    let w = &g * &g.adjoint();
    let t = w.trace().re;
    w.scale(1.0 / t)
}

/// Haar-distributed unitary: Ginibre sample orthonormalized by modified
/// Gram–Schmidt (run twice) with the phase fixed on each pivot.
pub fn haar_unitary(dim: usize, rng: &mut impl Rng) -> ComplexMatrix {
    let g = ginibre(dim, rng);
    let mut cols: Vec<Vec<Complex64>> = (0..dim)
        .map(|t| (0..dim).map(|i| g.get(i, t)).collect())
        .collect();
    for t in 0..dim {
        for _pass in 0..2 {
            for s in 0..t {
                let proj = crate::linalg::inner(&cols[s], &cols[t]);
                for i in 0..dim {
                    let v = cols[s][i] * proj;
                    cols[t][i] -= v;
                }
            }
        }
        let norm = cols[t]
            .iter()
            .map(|z| z.norm_sqr())
            .sum::<f64>()
            .sqrt();
        // Phase fix: make the leading entry's phase cancel, Haar-correct.
        let lead = cols[t][t];
        let phase = if lead.norm() > 0.0 {
            lead / lead.norm()
        } else {
            Complex64::new(1.0, 0.0)
        };
        for z in cols[t].iter_mut() {
            *z /= phase * norm;
        }
    }
    ComplexMatrix::from_fn(dim, |i, t| cols[t][i])
}

/// Flat Dirichlet weights (uniform on the simplex) via normalized
/// exponentials.
pub fn dirichlet_flat(n: usize, rng: &mut impl Rng) -> Vec<f64> {
    let mut w: Vec<f64> = (0..n)
        .map(|_| -rng.gen::<f64>().max(f64::MIN_POSITIVE).ln())
        .collect();
    let total: f64 = w.iter().sum();
    for v in w.iter_mut() {
        *v /= total;
    }
    w
}

/// Uniform direction on the unit sphere.
pub fn random_unit_vector(rng: &mut impl Rng) -> [f64; 3] {
    loop {
        let v = [
            standard_normal(rng),
            standard_normal(rng),
            standard_normal(rng),
        ];
        let n = (v[0] * v[0] + v[1] * v[1] + v[2] * v[2]).sqrt();
        if n > 1e-12 {
            return [v[0] / n, v[1] / n, v[2] / n];
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn haar_unitary_is_unitary() {
        let mut rng = rng_from_seed(7);
        for dim in [2usize, 3, 5] {
            let u = haar_unitary(dim, &mut rng);
            let gram = &u.adjoint() * &u;
            let dev = (&gram - &ComplexMatrix::identity(dim)).max_abs();
            assert!(dev < 1e-12, "dim {dim}: unitarity deviation {dev}");
        }
    }

    #[test]
    fn random_density_is_state() {
        let mut rng = rng_from_seed(11);
        let rho = random_density(4, &mut rng);
        assert!(rho.is_hermitian(1e-12));
        assert!((rho.trace().re - 1.0).abs() < 1e-12);
        assert!(rho.is_psd(1e-12));
    }

    #[test]
    fn dirichlet_sums_to_one() {
        let mut rng = rng_from_seed(3);
        let w = dirichlet_flat(5, &mut rng);
        assert!((w.iter().sum::<f64>() - 1.0).abs() < 1e-12);
        assert!(w.iter().all(|&x| x > 0.0));
    }

    #[test]
    fn seeding_is_deterministic() {
        let a = ginibre(3, &mut rng_from_seed(42));
        let b = ginibre(3, &mut rng_from_seed(42));
        assert_eq!(a, b);
    }
}
