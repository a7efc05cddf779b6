//! Independent-oracle checks for the kernel: brute-force index loops and a
//! double-double (twofloat) spectral route that never touches the library's
//! own decompositions.

#![allow(clippy::needless_range_loop)]

use steerlab_core::linalg::{
    self, herm_sqrt, partial_trace_first, schatten_norm, tensor, Complex64, ComplexMatrix,
};
use steerlab_core::random;
use twofloat::TwoFloat;

fn random_matrix(dim: usize, seed: u64) -> ComplexMatrix {
    let mut rng = random::rng_from_seed(seed);
    random::ginibre(dim, &mut rng)
}

#[test]
fn partial_trace_matches_brute_force_on_random_hermitian() {
    for seed in 0..25u64 {
        let m = random_matrix(4, seed).hermitized();
        let got = partial_trace_first(&m, 2, 2).unwrap();
        // Literal double loop over the first-factor-major convention.
        for i in 0..2 {
            for j in 0..2 {
                let mut manual = Complex64::new(0.0, 0.0);
                for k in 0..2 {
                    manual += m.get(k * 2 + i, k * 2 + j);
                }
                assert!((got.get(i, j) - manual).norm() < 1e-14);
            }
        }
    }
}

#[test]
fn herm_sqrt_multiply_back_on_random_densities() {
    for seed in 0..25u64 {
        let mut rng = random::rng_from_seed(seed);
        let rho = random::random_density(4, &mut rng);
        let root = herm_sqrt(&rho, 1e-9).unwrap();
        let dev = (&(&root * &root) - &rho).max_abs();
        assert!(dev < 1e-10, "seed {seed}: squared-back deviation {dev}");
        assert!(root.is_hermitian(1e-12));
        assert!(root.is_psd(1e-10));
    }
}

/// Real symmetric Jacobi eigenvalues in double-double arithmetic.
///
/// Plain cyclic sweeps with no eigenvector accumulation; accurate far below
/// f64 roundoff, which is all the oracle needs.
fn jacobi_eigenvalues_dd(mut a: Vec<Vec<TwoFloat>>) -> Vec<TwoFloat> {
    let n = a.len();
    let one = TwoFloat::from(1.0);
    for _sweep in 0..120 {
        let mut off = TwoFloat::from(0.0);
        for p in 0..n {
            for q in (p + 1)..n {
                off += a[p][q] * a[p][q];
            }
        }
        if off < TwoFloat::from(1e-70) {
            break;
        }
        for p in 0..n {
            for q in (p + 1)..n {
                let apq = a[p][q];
                if apq.abs() < TwoFloat::from(1e-60) {
                    continue;
                }
                let tau = (a[q][q] - a[p][p]) / (TwoFloat::from(2.0) * apq);
                let t = if tau >= TwoFloat::from(0.0) {
                    one / (tau + (one + tau * tau).sqrt())
                } else {
                    -one / (-tau + (one + tau * tau).sqrt())
                };
                let c = one / (one + t * t).sqrt();
                let s = t * c;
                for r in 0..n {
                    let arp = a[r][p];
                    let arq = a[r][q];
                    a[r][p] = arp * c - arq * s;
                    a[r][q] = arp * s + arq * c;
                }
                for col in 0..n {
                    let apc = a[p][col];
                    let aqc = a[q][col];
                    a[p][col] = apc * c - aqc * s;
                    a[q][col] = apc * s + aqc * c;
                }
                a[p][q] = TwoFloat::from(0.0);
                a[q][p] = TwoFloat::from(0.0);
            }
        }
    }
    (0..n).map(|i| a[i][i]).collect()
}

/// Singular values of a complex matrix through the real embedding
/// R = [[Re, -Im], [Im, Re]]: the spectrum of RᵀR is the set of squared
/// singular values of the complex matrix, each doubled.
fn singular_values_dd(m: &ComplexMatrix) -> Vec<f64> {
    let n = m.dim();
    let mut r = vec![vec![TwoFloat::from(0.0); 2 * n]; 2 * n];
    for i in 0..n {
        for j in 0..n {
            let z = m.get(i, j);
            r[i][j] = TwoFloat::from(z.re);
            r[i][j + n] = TwoFloat::from(-z.im);
            r[i + n][j] = TwoFloat::from(z.im);
            r[i + n][j + n] = TwoFloat::from(z.re);
        }
    }
    let mut gram = vec![vec![TwoFloat::from(0.0); 2 * n]; 2 * n];
    for i in 0..2 * n {
        for j in 0..2 * n {
            let mut acc = TwoFloat::from(0.0);
            for k in 0..2 * n {
                acc += r[k][i] * r[k][j];
            }
            gram[i][j] = acc;
        }
    }
    let eigs = jacobi_eigenvalues_dd(gram);
    let mut vals: Vec<f64> = eigs
        .iter()
        .map(|l| {
            let v: f64 = (*l).into();
            v.max(0.0).sqrt()
        })
        .collect();
    vals.sort_by(|a, b| b.partial_cmp(a).unwrap());
    // Each complex singular value shows up twice in the embedding.
    vals.into_iter().step_by(2).collect()
}

#[test]
fn schatten_trace_norm_matches_double_double_oracle() {
    for seed in 100..115u64 {
        let m = random_matrix(4, seed);
        let got = schatten_norm(&m, 1.0).unwrap();
        let oracle: f64 = singular_values_dd(&m).iter().sum();
        assert!(
            (got - oracle).abs() < 1e-11 * oracle.max(1.0),
            "seed {seed}: {got} vs oracle {oracle}"
        );
    }
    // Hermitian and skew-Hermitian specializations against the same oracle.
    for seed in 200..210u64 {
        let h = random_matrix(3, seed).hermitized();
        let got = schatten_norm(&h, 1.0).unwrap();
        let oracle: f64 = singular_values_dd(&h).iter().sum();
        assert!((got - oracle).abs() < 1e-12 * oracle.max(1.0));

        let skew = linalg::commutator(&h, &random_matrix(3, seed + 1000).hermitized()).unwrap();
        let got = schatten_norm(&skew, 1.0).unwrap();
        let oracle: f64 = singular_values_dd(&skew).iter().sum();
        assert!((got - oracle).abs() < 1e-12 * oracle.max(1.0));
    }
}

#[test]
fn schatten_other_orders_match_oracle() {
    for seed in 300..308u64 {
        let m = random_matrix(3, seed);
        let svals = singular_values_dd(&m);
        for p in [2.0, 3.5] {
            let got = schatten_norm(&m, p).unwrap();
            let oracle = svals.iter().map(|s| s.powf(p)).sum::<f64>().powf(1.0 / p);
            assert!((got - oracle).abs() < 1e-11 * oracle.max(1.0));
        }
        let got = schatten_norm(&m, f64::INFINITY).unwrap();
        assert!((got - svals[0]).abs() < 1e-11 * svals[0].max(1.0));
    }
}

#[test]
fn qubit_mub_commutator_trace_norm_is_one() {
    // ‖[|a⟩⟨a|, |±⟩⟨±|]‖₁ = 2 · (1/2) · (1/2) · 2 = 1 by hand.
    let m = steerlab_core::scenarios::mub_pair(2);
    for a in 0..2 {
        for b in 0..2 {
            let c = linalg::commutator(m.element(0, a), m.element(1, b)).unwrap();
            let norm = schatten_norm(&c, 1.0).unwrap();
            assert!((norm - 1.0).abs() < 1e-13, "pair ({a},{b}): {norm}");
        }
    }
}

#[test]
fn fourier_mub_saturates_the_upsilon_bound_at_d3() {
    let m = steerlab_core::scenarios::mub_pair(3);
    let got = steerlab_core::measures::upsilon(&m, 1.0).unwrap();
    let bound = 2.0 * 3.0 * 2.0f64.sqrt();
    assert!((got - bound).abs() < 1e-9, "Υ₁ = {got} vs bound {bound}");
}

#[test]
fn eigensolver_recovers_a_planted_spectrum_at_dim_25() {
    let mut rng = random::rng_from_seed(77);
    let u = random::haar_unitary(25, &mut rng);
    let spectrum: Vec<f64> = (0..25).map(|i| (i as f64 - 7.0) / 5.0).collect();
    let m = &(&u * &ComplexMatrix::diagonal(&spectrum)) * &u.adjoint();
    let eig = linalg::eigh(&m);
    let mut expected = spectrum.clone();
    expected.sort_by(|a, b| a.partial_cmp(b).unwrap());
    for (got, want) in eig.eigenvalues.iter().zip(&expected) {
        assert!((got - want).abs() < 1e-12, "{got} vs {want}");
    }
    // Reconstruction through the eigenvectors.
    let mut rebuilt = ComplexMatrix::zeros(25);
    for t in 0..25 {
        let col = eig.eigenvector(t);
        rebuilt = &rebuilt + &linalg::outer(&col, &col).scale(eig.eigenvalues[t]);
    }
    assert!((&rebuilt - &m).max_abs() < 1e-12);
}

#[test]
fn tensor_partial_trace_roundtrip_on_random_pairs() {
    for seed in 400..420u64 {
        let a = random_matrix(2, seed);
        let b = random_matrix(3, seed + 5000);
        let out = partial_trace_first(&tensor(&a, &b), 2, 3).unwrap();
        let expected = b.scale_complex(a.trace());
        assert!((&out - &expected).max_abs() < 1e-10);
    }
}
