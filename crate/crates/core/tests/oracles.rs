//! Cross-checks of the closed forms against independent constructions.

use itertools::Itertools;
use nalgebra::Complex;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use statdisc::applications::{
    detect_entanglement, entanglement_detection_report, purify_symmetric, TwoQubitPureState,
};
use statdisc::discrimination::{aligned_vs_mixed_report, hypothesis_pair, map_strategy};
use statdisc::linalg::{
    hermitian_eigen, max_abs_diff, rank, swap_operator, symmetric_projector, ComplexMatrix,
    ComplexVector, DensityMatrix,
};
use statdisc::multiport::{
    dft_unitary, first_quantized_mixed, first_quantized_oracle, output_distribution, SpatialPattern,
};
use statdisc::states::{
    aligned_integrand, antialigned_integrand, dicke_basis, quadrature_average, rho_aligned,
    sigma_antialigned, tau_mixed, QuadratureScheme,
};
use statdisc::{Statistics, C64};

fn re(x: f64) -> C64 {
    Complex::new(x, 0.0)
}

/// Symmetrizer as the literal average of all n! qubit permutation matrices,
/// built by relabelling bit positions directly.
fn brute_force_symmetrizer(n: usize) -> ComplexMatrix {
    let dim = 1usize << n;
    let mut acc = ComplexMatrix::zeros(dim, dim);
    let mut count = 0.0;
    for perm in (0..n).permutations(n) {
        for x in 0..dim {
            let bits: Vec<usize> = (0..n).map(|k| (x >> (n - 1 - k)) & 1).collect();
            let y = (0..n).fold(0, |acc, k| (acc << 1) | bits[perm[k]]);
            acc[(y, x)] += re(1.0);
        }
        count += 1.0;
    }
    acc / re(count)
}

/// Symmetrize every computational basis vector, Gram-Schmidt the results and
/// sum the outer products.
fn gram_schmidt_symmetric_projector(n: usize) -> (ComplexMatrix, usize) {
    let dim = 1usize << n;
    let sym = brute_force_symmetrizer(n);
    let mut basis: Vec<ComplexVector> = Vec::new();
    for x in 0..dim {
        let mut v = sym.column(x).into_owned();
        for b in &basis {
            let overlap = b.dotc(&v);
            v -= b * overlap;
        }
        let norm = v.norm();
        if norm > 1e-9 {
            basis.push(v / re(norm));
        }
    }
    let p = basis.iter().fold(ComplexMatrix::zeros(dim, dim), |acc, v| {
        acc + v * v.adjoint()
    });
    (p, basis.len())
}

#[test]
fn symmetric_projector_three_qubits() {
    let (oracle, count) = gram_schmidt_symmetric_projector(3);
    assert_eq!(count, 4);
    let p = symmetric_projector(3).unwrap();
    assert!(max_abs_diff(&p, &oracle) < 1e-12);
    assert_eq!(rank(&p).unwrap(), 4);
}

#[test]
fn dicke_projector_matches_brute_force_symmetrizer() {
    for n in 1..=6 {
        let dicke = dicke_basis(n).unwrap();
        assert_eq!(dicke.vectors().len(), n + 1);
        let dev = max_abs_diff(&dicke.projector(), &brute_force_symmetrizer(n));
        assert!(dev < 1e-12, "n = {n}: {dev:e}");
        let dev = max_abs_diff(
            &symmetric_projector(n).unwrap(),
            &brute_force_symmetrizer(n),
        );
        assert!(dev < 1e-12, "n = {n}: {dev:e}");
    }
}

#[test]
fn dicke_vectors_are_orthonormal_and_permutation_invariant() {
    for n in 1..=5 {
        let dicke = dicke_basis(n).unwrap();
        let sym = brute_force_symmetrizer(n);
        for (i, a) in dicke.vectors().iter().enumerate() {
            for (j, b) in dicke.vectors().iter().enumerate() {
                let expected = if i == j { 1.0 } else { 0.0 };
                assert!((a.dotc(b) - re(expected)).norm() < 1e-12);
            }
            assert!((&sym * a - a).norm() < 1e-12);
        }
    }
}

#[test]
fn quadrature_reproduces_aligned_pair() {
    let oracle = quadrature_average(aligned_integrand(2), QuadratureScheme::default()).unwrap();
    let dev = max_abs_diff(oracle.matrix(), rho_aligned(2).unwrap().matrix());
    assert!(dev < 1e-8, "{dev:e}");
}

#[test]
fn quadrature_reproduces_aligned_triple() {
    let oracle = quadrature_average(aligned_integrand(3), QuadratureScheme::default()).unwrap();
    let dev = max_abs_diff(oracle.matrix(), rho_aligned(3).unwrap().matrix());
    assert!(dev < 1e-8, "{dev:e}");
}

#[test]
fn quadrature_reproduces_antialigned_pair() {
    let oracle = quadrature_average(antialigned_integrand(), QuadratureScheme::default()).unwrap();
    let dev = max_abs_diff(oracle.matrix(), sigma_antialigned().matrix());
    assert!(dev < 1e-8, "{dev:e}");

    // The singlet eigenvalue of the averaged state is 1/2.
    let (values, vectors) = hermitian_eigen(oracle.matrix()).unwrap();
    let h = 1.0 / 2f64.sqrt();
    let singlet = ComplexVector::from_column_slice(&[re(0.0), re(h), re(-h), re(0.0)]);
    let top = vectors.column(3).into_owned();
    assert!((values[3] - 0.5).abs() < 1e-8);
    assert!((top.dotc(&singlet).norm() - 1.0).abs() < 1e-8);
}

#[test]
fn reduced_aligned_pair_is_maximally_mixed() {
    let oracle = quadrature_average(aligned_integrand(2), QuadratureScheme::default()).unwrap();
    let reduced = oracle.partial_trace(&[0]).unwrap();
    assert!(max_abs_diff(reduced.matrix(), &(ComplexMatrix::identity(2, 2) * re(0.5))) < 1e-8);
    let reduced = rho_aligned(2).unwrap().partial_trace(&[1]).unwrap();
    assert!(max_abs_diff(reduced.matrix(), &(ComplexMatrix::identity(2, 2) * re(0.5))) < 1e-12);
}

#[test]
fn monte_carlo_quadrature_agrees_loosely() {
    let scheme = QuadratureScheme::MonteCarlo {
        nodes: 10_000,
        seed: 42,
    };
    let oracle = quadrature_average(antialigned_integrand(), scheme).unwrap();
    assert!(max_abs_diff(oracle.matrix(), sigma_antialigned().matrix()) < 0.02);
}

#[test]
fn ensemble_inputs_match_the_first_quantized_oracle() {
    let u2 = dft_unitary(2).unwrap();
    let u3 = dft_unitary(3).unwrap();
    for stats in Statistics::ALL {
        for (state, u) in [
            (rho_aligned(2).unwrap(), &u2),
            (sigma_antialigned(), &u2),
            (tau_mixed(2).unwrap(), &u2),
            (rho_aligned(3).unwrap(), &u3),
            (tau_mixed(3).unwrap(), &u3),
        ] {
            let second = output_distribution(&state, stats, u).unwrap();
            let first = first_quantized_mixed(&state, stats, u).unwrap();
            assert!(second.max_abs_diff(&first) < 1e-12);
        }
    }
}

#[test]
fn two_port_reference_distributions() {
    let u = dft_unitary(2).unwrap();
    let fermion = Statistics::Fermion;
    let d = output_distribution(&rho_aligned(2).unwrap(), fermion, &u).unwrap();
    assert!((d.antibunching() - 1.0).abs() < 1e-12);
    let d = output_distribution(&sigma_antialigned(), fermion, &u).unwrap();
    assert!((d.antibunching() - 0.5).abs() < 1e-12);
    assert!((d.bunching() - 0.5).abs() < 1e-12);

    // τ₂ is the uniform mixture of the four product basis states. Bosons
    // with equal spins always bunch; with opposite spins they behave as
    // distinguishable particles and bunch half the time: 1/2·1 + 1/2·1/2.
    let d = output_distribution(&tau_mixed(2).unwrap(), Statistics::Boson, &u).unwrap();
    assert!((d.bunching() - 0.75).abs() < 1e-12);
    assert!((d.antibunching() - 0.25).abs() < 1e-12);
    let rho = output_distribution(&rho_aligned(2).unwrap(), Statistics::Boson, &u).unwrap();
    let (_, p) = map_strategy(&rho, &d, (0.5, 0.5)).unwrap();
    assert!((p - 0.625).abs() < 1e-12);
}

#[test]
fn aligned_input_ensemble_weights() {
    let ens =
        statdisc::multiport::prepare_input(&rho_aligned(2).unwrap(), Statistics::Boson).unwrap();
    assert_eq!(ens.members().len(), 3);
    for (w, _) in ens.members() {
        assert!((w - 1.0 / 3.0).abs() < 1e-12);
    }
}

#[test]
fn random_three_qubit_states_agree_across_formalisms() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let u = dft_unitary(3).unwrap();
    for _ in 0..20 {
        let v = ComplexVector::from_fn(8, |_, _| {
            Complex::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0))
        });
        for stats in Statistics::ALL {
            let ens = statdisc::multiport::prepare_pure(&v, stats).unwrap();
            let second = statdisc::multiport::spatial_distribution(
                &statdisc::multiport::evolve(&ens, &u).unwrap().into(),
            )
            .unwrap();
            let first = first_quantized_oracle(&v, stats, &u).unwrap();
            assert!(second.max_abs_diff(&first) < 1e-10);
        }
    }
}

/// 4x4 symmetric projection written out by hand: P = (I + SWAP)/2 applied
/// to ρ⊗ρ, then the first qubit kept by summing matrix blocks.
fn purification_oracle(r: [f64; 3]) -> ([f64; 3], f64) {
    let rho = DensityMatrix::from_bloch(r).unwrap();
    let m = rho.matrix();
    let mut pair = ComplexMatrix::zeros(4, 4);
    for (i, j, k, l) in itertools::iproduct!(0..2, 0..2, 0..2, 0..2) {
        pair[(2 * i + k, 2 * j + l)] = m[(i, j)] * m[(k, l)];
    }
    let p = (ComplexMatrix::identity(4, 4) + swap_operator()) * re(0.5);
    let projected = &p * &pair * &p;
    let success = projected.trace().re;
    let mut reduced = ComplexMatrix::zeros(2, 2);
    for (i, j, k) in itertools::iproduct!(0..2, 0..2, 0..2) {
        reduced[(i, j)] += projected[(2 * i + k, 2 * j + k)] / re(success);
    }
    let bloch = [
        2.0 * reduced[(0, 1)].re,
        -2.0 * reduced[(0, 1)].im,
        (reduced[(0, 0)] - reduced[(1, 1)]).re,
    ];
    (bloch, success)
}

#[test]
fn purification_half_length_along_z() {
    let (bloch, success) = purification_oracle([0.0, 0.0, 0.5]);
    // Frozen from the oracle: success (3 + r²)/4 and r_out = 4r/(3 + r²).
    assert!((success - 0.8125).abs() < 1e-15);
    assert!((bloch[2] - 0.615_384_615_384_615_4).abs() < 1e-15);

    let out = purify_symmetric(&DensityMatrix::from_bloch([0.0, 0.0, 0.5]).unwrap()).unwrap();
    assert!((out.success_probability - success).abs() < 1e-14);
    let r = out.state.bloch_vector().unwrap();
    for k in 0..3 {
        assert!((r[k] - bloch[k]).abs() < 1e-14);
    }
}

#[test]
fn purification_matches_oracle_on_random_inputs() {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    for _ in 0..50 {
        let r: [f64; 3] = loop {
            let v = [
                rng.random_range(-1.0..1.0),
                rng.random_range(-1.0..1.0),
                rng.random_range(-1.0..1.0),
            ];
            if v.iter().map(|x| x * x).sum::<f64>() <= 1.0 {
                break v;
            }
        };
        let (bloch, success) = purification_oracle(r);
        let out = purify_symmetric(&DensityMatrix::from_bloch(r).unwrap()).unwrap();
        assert!((out.success_probability - success).abs() < 1e-14);
        let got = out.state.bloch_vector().unwrap();
        for k in 0..3 {
            assert!((got[k] - bloch[k]).abs() < 1e-13);
        }
    }
}

/// For two fermions at a 50/50 port, a spin singlet forces a symmetric
/// spatial wavefunction (both in one arm) and a spin triplet an
/// antisymmetric one (one per arm). With ρ₂ entirely triplet, the MAP rule
/// catches H1 exactly when the pair bunches, so success = ½ + ½·⟨ψ⁻|ρ_B⊗ρ_B|ψ⁻⟩.
fn detection_oracle(lambda: f64) -> f64 {
    let rho_b =
        ComplexMatrix::from_row_slice(2, 2, &[re(1.0 - lambda), re(0.0), re(0.0), re(lambda)]);
    let pair = rho_b.kronecker(&rho_b);
    let h = 1.0 / 2f64.sqrt();
    let singlet = ComplexVector::from_column_slice(&[re(0.0), re(h), re(-h), re(0.0)]);
    let weight = (singlet.adjoint() * pair * &singlet)[(0, 0)].re;
    0.5 + 0.5 * weight
}

#[test]
fn partial_entanglement_detection() {
    let expected = detection_oracle(0.25);
    assert!((expected - 0.59375).abs() < 1e-15);
    let psi = TwoQubitPureState::from_schmidt(0.25).unwrap();
    for stats in Statistics::ALL {
        let p = detect_entanglement(&psi, stats).unwrap();
        assert!((p - expected).abs() < 1e-12, "{stats}: {p}");
    }
    for k in 0..=10 {
        let lambda = 0.05 * k as f64;
        let psi = TwoQubitPureState::from_schmidt(lambda).unwrap();
        let p = detect_entanglement(&psi, Statistics::Fermion).unwrap();
        assert!((p - detection_oracle(lambda)).abs() < 1e-12);
    }
}

#[test]
fn detection_bunching_follows_singlet_weight() {
    let psi = TwoQubitPureState::from_schmidt(0.25).unwrap();
    let r = entanglement_detection_report(&psi, Statistics::Fermion).unwrap();
    assert!((r.distributions.1.bunching() - 2.0 * (detection_oracle(0.25) - 0.5)).abs() < 1e-12);
}

#[test]
fn three_port_fermion_patterns() {
    let r = aligned_vs_mixed_report(3, Statistics::Fermion).unwrap();
    let (rho, tau) = &r.distributions;
    assert!((rho.probability(&SpatialPattern(vec![1, 1, 1])) - 1.0).abs() < 1e-12);
    assert!((tau.probability(&SpatialPattern(vec![1, 1, 1])) - 0.5).abs() < 1e-12);
}

#[test]
fn helstrom_of_aligned_pair_against_mixed_uses_full_spectrum() {
    let (h0, h1) = hypothesis_pair(rho_aligned(2).unwrap(), tau_mixed(2).unwrap(), 0.5).unwrap();
    let diff = h0.state.matrix() - h1.state.matrix();
    // Spectrum of ρ₂ − τ₂: +1/12 on the triplet (x3), −1/4 on the singlet.
    let (values, _) = hermitian_eigen(&diff).unwrap();
    assert!((values[0] + 0.25).abs() < 1e-15);
    for v in &values[1..] {
        assert!((v - 1.0 / 12.0).abs() < 1e-15);
    }
}
