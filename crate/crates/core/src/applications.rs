//! Uses of the beam-splitter discrimination scheme: entanglement detection on
//! two copies of a pure state, purification by symmetric projection, the
//! classical exclusion model and the `N`-particle scan.

use std::collections::BTreeMap;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::discrimination::{
    aligned_vs_mixed_closed_form, aligned_vs_mixed_report, beam_splitter_discrimination,
    helstrom_aligned_vs_mixed, hypothesis_pair, map_strategy, DiscriminationReport,
};
use crate::error::{Error, Result};
use crate::linalg::{
    c_re, hermitian_eigenvalues, symmetric_projector, ComplexVector, DensityMatrix, C64,
};
use crate::multiport::{OutcomeDistribution, SpatialPattern, Statistics, MAX_ARMS};
use crate::states::rho_aligned;

/// Largest particle number handled by exact enumeration and exact Fock
/// simulation.
pub const MAX_EXACT_N: usize = MAX_ARMS;

/// Normalized pure state of two qubits `A ⊗ B`.
#[derive(Debug, Clone, PartialEq)]
pub struct TwoQubitPureState {
    amplitudes: [C64; 4],
    schmidt_lambda: f64,
}

impl TwoQubitPureState {
    pub fn new(amplitudes: [C64; 4]) -> Result<Self> {
        let norm: f64 = amplitudes.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt();
        if (norm - 1.0).abs() > 1e-12 {
            return Err(Error::invalid(format!(
                "two-qubit state norm {norm} is not 1"
            )));
        }
        let mut state = Self {
            amplitudes,
            schmidt_lambda: 0.0,
        };
        let ev = hermitian_eigenvalues(state.reduced_b().matrix())?;
        state.schmidt_lambda = ev[0].clamp(0.0, 0.5);
        Ok(state)
    }

    /// `√(1-λ)|00⟩ + √λ|11⟩` for `λ ∈ [0, 1/2]`.
    pub fn from_schmidt(lambda: f64) -> Result<Self> {
        if !(0.0..=0.5).contains(&lambda) {
            return Err(Error::invalid(format!(
                "Schmidt weight {lambda} outside [0, 1/2]"
            )));
        }
        let zero = C64::default();
        Self::new([c_re((1.0 - lambda).sqrt()), zero, zero, c_re(lambda.sqrt())])
    }

    /// `(|01⟩ - |10⟩)/√2`.
    pub fn singlet() -> Self {
        let h = 1.0 / 2f64.sqrt();
        Self::new([C64::default(), c_re(h), c_re(-h), C64::default()])
            .expect("singlet is normalized")
    }

    pub fn amplitudes(&self) -> [C64; 4] {
        self.amplitudes
    }

    /// Smaller squared Schmidt coefficient.
    pub fn schmidt_lambda(&self) -> f64 {
        self.schmidt_lambda
    }

    pub fn density_matrix(&self) -> DensityMatrix {
        DensityMatrix::from_pure(
            &ComplexVector::from_column_slice(&self.amplitudes),
            vec![2, 2],
        )
        .expect("normalized by construction")
    }

    /// Reduced state of particle `B`.
    pub fn reduced_b(&self) -> DensityMatrix {
        self.density_matrix()
            .partial_trace(&[1])
            .expect("factor 1 exists")
    }
}

/// Two copies of `psi`; particle `B` of each copy meets the other at a 50/50
/// beam splitter. `H0` is the separable hypothesis, under which the two `B`
/// particles are an aligned pair in an unknown direction (`ρ₂`); `H1` is
/// `ρ_B ⊗ ρ_B`. Equal priors.
pub fn entanglement_detection_report(
    psi: &TwoQubitPureState,
    statistics: Statistics,
) -> Result<DiscriminationReport> {
    let rho_b = psi.reduced_b();
    let pair = rho_b.tensor(&rho_b);
    let (h0, h1) = hypothesis_pair(rho_aligned(2)?, pair, 0.5)?;
    beam_splitter_discrimination(&h0, &h1, statistics)
}

/// Success probability of the two-copy entanglement test.
pub fn detect_entanglement(psi: &TwoQubitPureState, statistics: Statistics) -> Result<f64> {
    entanglement_detection_report(psi, statistics).map(|r| r.p_bs)
}

/// Result of one round of symmetric projection on `ρ ⊗ ρ`.
#[derive(Debug, Clone)]
pub struct Purification {
    /// Single-qubit marginal of the projected pair.
    pub state: DensityMatrix,
    pub success_probability: f64,
    /// The pair is discarded with this probability.
    pub failure_probability: f64,
}

/// Projects two copies of `rho` onto the symmetric subspace and keeps one
/// qubit of the post-selected pair.
pub fn purify_symmetric(rho: &DensityMatrix) -> Result<Purification> {
    if rho.dim() != 2 {
        return Err(Error::DimensionMismatch {
            expected: 2,
            found: rho.dim(),
        });
    }
    let p = symmetric_projector(2)?;
    let pair = rho.tensor(rho);
    let success = (&p * pair.matrix()).trace().re;
    if success < 1e-14 {
        return Err(Error::DegenerateProjection(success));
    }
    let projected = &p * pair.matrix() * &p / c_re(success);
    let projected = DensityMatrix::qubits(projected, 2)?;
    Ok(Purification {
        state: projected.partial_trace(&[0])?,
        success_probability: success,
        failure_probability: 1.0 - success,
    })
}

/// How the exclusion constraint of the classical model is read.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ClassicalInterpretation {
    /// At most one particle per internal state per output arm.
    Standard,
    /// At most two particles per internal state per output arm.
    Literal,
}

impl ClassicalInterpretation {
    pub fn name(&self) -> &'static str {
        match self {
            ClassicalInterpretation::Standard => "standard",
            ClassicalInterpretation::Literal => "literal",
        }
    }

    fn cap(&self) -> u8 {
        match self {
            ClassicalInterpretation::Standard => 1,
            ClassicalInterpretation::Literal => 2,
        }
    }
}

impl std::str::FromStr for ClassicalInterpretation {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "standard" => Ok(ClassicalInterpretation::Standard),
            "literal" => Ok(ClassicalInterpretation::Literal),
            other => Err(Error::invalid(format!("unknown interpretation '{other}'"))),
        }
    }
}

/// Classical-model results for one `n`.
#[derive(Debug, Clone)]
pub struct ClassicalReport {
    pub n: usize,
    pub interpretation: ClassicalInterpretation,
    /// Guess "aligned" exactly when every particle leaves by a distinct arm.
    pub p_success: f64,
    /// Bayes-optimal rule over the same classical pattern statistics.
    pub p_map: f64,
    pub p_helstrom: f64,
    pub aligned: OutcomeDistribution,
    pub mixed: OutcomeDistribution,
}

/// Distribution of per-arm counts when `k` labelled particles are routed
/// uniformly over all assignments to `n_arms` arms with at most `cap` per
/// arm. The number of labelled assignments behind a count vector is
/// `k! / Π c_a!`.
fn capped_routing(k: usize, n_arms: usize, cap: u8) -> Vec<(Vec<u8>, f64)> {
    fn rec(
        arm: usize,
        left: usize,
        n_arms: usize,
        cap: u8,
        cur: &mut Vec<u8>,
        out: &mut Vec<Vec<u8>>,
    ) {
        if arm == n_arms {
            if left == 0 {
                out.push(cur.clone());
            }
            return;
        }
        for c in 0..=left.min(cap as usize) {
            cur.push(c as u8);
            rec(arm + 1, left - c, n_arms, cap, cur, out);
            cur.pop();
        }
    }
    let mut counts = Vec::new();
    rec(0, k, n_arms, cap, &mut Vec::new(), &mut counts);
    let fact = |m: usize| (1..=m).map(|i| i as f64).product::<f64>();
    let weights: Vec<f64> = counts
        .iter()
        .map(|c| fact(k) / c.iter().map(|&x| fact(x as usize)).product::<f64>())
        .collect();
    let total: f64 = weights.iter().sum();
    counts
        .into_iter()
        .zip(weights)
        .map(|(c, w)| (c, w / total))
        .collect()
}

/// Pattern distribution for a mixture over the number `w` of spin-1
/// particles; each spin group is routed independently.
fn classical_patterns(
    n: usize,
    spin_weights: &[(usize, f64)],
    cap: u8,
) -> Result<OutcomeDistribution> {
    let mut probs: BTreeMap<SpatialPattern, f64> = BTreeMap::new();
    for &(w, pw) in spin_weights {
        if pw == 0.0 {
            continue;
        }
        let up = capped_routing(w, n, cap);
        let down = capped_routing(n - w, n, cap);
        for (u, pu) in &up {
            for (d, pd) in &down {
                let pattern = SpatialPattern(u.iter().zip(d).map(|(a, b)| a + b).collect());
                *probs.entry(pattern).or_default() += pw * pu * pd;
            }
        }
    }
    OutcomeDistribution::new(n, n, probs)
}

fn binomial(n: usize, k: usize) -> f64 {
    (0..k).fold(1.0, |acc, i| acc * (n - i) as f64 / (i + 1) as f64)
}

fn check_exact_capacity(n: usize, what: &'static str, hint: &'static str) -> Result<()> {
    if n == 0 {
        return Err(Error::invalid("need at least one particle"));
    }
    if n > MAX_EXACT_N {
        return Err(Error::Capacity {
            what,
            n,
            max: MAX_EXACT_N,
            hint,
        });
    }
    Ok(())
}

const MONTE_CARLO_HINT: &str = "; use the Monte Carlo estimator instead";

/// Classical distinguishable particles with an exclusion constraint.
///
/// Under the aligned hypothesis every particle carries the same internal
/// state; under the mixed hypothesis each internal state is an independent
/// fair coin. Given the internal states, each spin group is routed uniformly
/// over the arm assignments the constraint allows, and probabilities (not
/// amplitudes) are summed over all outcomes.
pub fn classical_pauli_report(
    n: usize,
    interpretation: ClassicalInterpretation,
) -> Result<ClassicalReport> {
    check_exact_capacity(n, "classical exclusion model", MONTE_CARLO_HINT)?;
    let cap = interpretation.cap();
    let aligned_spins = [(0, 0.5), (n, 0.5)];
    let mixed_spins: Vec<(usize, f64)> = (0..=n)
        .map(|w| (w, binomial(n, w) / 2f64.powi(n as i32)))
        .collect();
    let aligned = classical_patterns(n, &aligned_spins, cap)?;
    let mixed = classical_patterns(n, &mixed_spins, cap)?;
    let p_success = 0.5 * aligned.antibunching() + 0.5 * (1.0 - mixed.antibunching());
    let (_, p_map) = map_strategy(&aligned, &mixed, (0.5, 0.5))?;
    Ok(ClassicalReport {
        n,
        interpretation,
        p_success,
        p_map,
        p_helstrom: aligned_vs_mixed_closed_form(n),
        aligned,
        mixed,
    })
}

/// Success probability of the classical model under the distinct-arms rule.
pub fn classical_pauli_success(n: usize, interpretation: ClassicalInterpretation) -> Result<f64> {
    classical_pauli_report(n, interpretation).map(|r| r.p_success)
}

/// Seeded Monte Carlo estimate of [`classical_pauli_success`], usable beyond
/// the exact-enumeration limit. Each hypothesis gets `samples` draws.
pub fn classical_pauli_monte_carlo(
    n: usize,
    interpretation: ClassicalInterpretation,
    samples: usize,
    seed: u64,
) -> Result<f64> {
    if n == 0 || samples == 0 {
        return Err(Error::invalid("need at least one particle and one sample"));
    }
    if n > 255 {
        return Err(Error::invalid("at most 255 particles"));
    }
    let cap = interpretation.cap();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);

    // Route `k` labelled particles uniformly among assignments with at most
    // `cap` per arm, adding to `counts`.
    let route = |k: usize, counts: &mut [u8], rng: &mut ChaCha8Rng| {
        if cap == 1 {
            let mut arms: Vec<usize> = (0..n).collect();
            let (chosen, _) = arms.partial_shuffle(rng, k);
            for &a in chosen.iter() {
                counts[a] += 1;
            }
        } else {
            loop {
                let mut local = vec![0u8; n];
                for _ in 0..k {
                    local[rng.random_range(0..n)] += 1;
                }
                if local.iter().all(|&c| c <= cap) {
                    for (c, l) in counts.iter_mut().zip(local) {
                        *c += l;
                    }
                    break;
                }
            }
        }
    };

    let mut distinct_aligned = 0usize;
    let mut distinct_mixed = 0usize;
    for _ in 0..samples {
        let mut counts = vec![0u8; n];
        route(n, &mut counts, &mut rng);
        if counts.iter().all(|&c| c <= 1) {
            distinct_aligned += 1;
        }

        let w = (0..n).filter(|_| rng.random_bool(0.5)).count();
        let mut counts = vec![0u8; n];
        route(w, &mut counts, &mut rng);
        route(n - w, &mut counts, &mut rng);
        if counts.iter().all(|&c| c <= 1) {
            distinct_mixed += 1;
        }
    }
    let s = samples as f64;
    Ok(0.5 * distinct_aligned as f64 / s + 0.5 * (1.0 - distinct_mixed as f64 / s))
}

/// One row of the `N`-particle scan.
#[derive(Debug, Clone, PartialEq)]
pub struct ConjectureRecord {
    pub n: usize,
    pub statistics: Statistics,
    /// MAP success over the full pattern distribution.
    pub p_bs_optimal: f64,
    pub p_helstrom: f64,
    pub gap: f64,
    /// Patterns with non-zero probability under either hypothesis.
    pub pattern_count: usize,
}

/// Quantum beam-splitter discrimination of `ρ_n` from `τ_n` for
/// `n = 1..=n_max`.
pub fn conjecture_scan(n_max: usize, statistics: Statistics) -> Result<Vec<ConjectureRecord>> {
    check_exact_capacity(n_max, "multiport scan", "")?;
    (1..=n_max)
        .map(|n| {
            let report = aligned_vs_mixed_report(n, statistics)?;
            let p_helstrom = helstrom_aligned_vs_mixed(n)?;
            let (d0, d1) = &report.distributions;
            let pattern_count = d0
                .probabilities()
                .iter()
                .filter(|(k, &p)| p > 1e-15 || d1.probability(k) > 1e-15)
                .count();
            Ok(ConjectureRecord {
                n,
                statistics,
                p_bs_optimal: report.p_bs,
                p_helstrom,
                gap: p_helstrom - report.p_bs,
                pattern_count,
            })
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::max_abs_diff;

    #[test]
    fn singlet_detection_is_five_eighths() {
        let p = detect_entanglement(&TwoQubitPureState::singlet(), Statistics::Fermion).unwrap();
        assert!((p - 0.625).abs() < 1e-12);
        let p = detect_entanglement(&TwoQubitPureState::singlet(), Statistics::Boson).unwrap();
        assert!((p - 0.625).abs() < 1e-12);
    }

    #[test]
    fn product_input_always_antibunches_for_fermions() {
        let psi = TwoQubitPureState::from_schmidt(0.0).unwrap();
        let r = entanglement_detection_report(&psi, Statistics::Fermion).unwrap();
        assert!((r.distributions.1.antibunching() - 1.0).abs() < 1e-12);
        assert!((r.distributions.0.antibunching() - 1.0).abs() < 1e-12);
        assert!((r.p_bs - 0.5).abs() < 1e-12);
    }

    #[test]
    fn schmidt_lambda_is_recovered() {
        for lambda in [0.0, 0.1, 0.25, 0.5] {
            let psi = TwoQubitPureState::from_schmidt(lambda).unwrap();
            assert!((psi.schmidt_lambda() - lambda).abs() < 1e-10);
        }
        assert!(TwoQubitPureState::from_schmidt(0.6).is_err());
        assert!((TwoQubitPureState::singlet().schmidt_lambda() - 0.5).abs() < 1e-12);
    }

    #[test]
    fn purification_extremes() {
        let pure = DensityMatrix::from_bloch([0.0, 0.0, 1.0]).unwrap();
        let out = purify_symmetric(&pure).unwrap();
        assert!((out.success_probability - 1.0).abs() < 1e-15);
        assert!(max_abs_diff(out.state.matrix(), pure.matrix()) < 1e-15);

        let mixed = DensityMatrix::from_bloch([0.0; 3]).unwrap();
        let out = purify_symmetric(&mixed).unwrap();
        assert!((out.success_probability - 0.75).abs() < 1e-15);
        assert!((out.failure_probability - 0.25).abs() < 1e-15);
        assert!(max_abs_diff(out.state.matrix(), mixed.matrix()) < 1e-15);
    }

    #[test]
    fn purification_rejects_registers() {
        let two = DensityMatrix::maximally_mixed(vec![2, 2]).unwrap();
        assert!(purify_symmetric(&two).is_err());
    }

    #[test]
    fn capped_routing_counts() {
        // Two particles, two arms, no cap: (2,0), (1,1), (0,2) with 1/4, 1/2, 1/4.
        let r = capped_routing(2, 2, 2);
        assert_eq!(r.len(), 3);
        assert!((r[1].1 - 0.5).abs() < 1e-15);
        // Cap 1 forbids bunching.
        let r = capped_routing(2, 2, 1);
        assert_eq!(r, vec![(vec![1, 1], 1.0)]);
    }

    #[test]
    fn classical_small_n() {
        let s = ClassicalInterpretation::Standard;
        assert!((classical_pauli_success(1, s).unwrap() - 0.5).abs() < 1e-15);
        assert!((classical_pauli_success(2, s).unwrap() - 0.625).abs() < 1e-15);
        assert!((classical_pauli_success(3, s).unwrap() - 0.75).abs() < 1e-15);
        assert!(matches!(
            classical_pauli_success(9, s),
            Err(Error::Capacity { .. })
        ));
        assert!(classical_pauli_success(0, s).is_err());
    }

    #[test]
    fn monte_carlo_tracks_exact() {
        for interp in [
            ClassicalInterpretation::Standard,
            ClassicalInterpretation::Literal,
        ] {
            let exact = classical_pauli_success(4, interp).unwrap();
            let mc = classical_pauli_monte_carlo(4, interp, 20_000, 42).unwrap();
            assert!((exact - mc).abs() < 0.02, "{interp:?}: {exact} vs {mc}");
        }
        assert_eq!(
            classical_pauli_monte_carlo(5, ClassicalInterpretation::Standard, 1000, 9).unwrap(),
            classical_pauli_monte_carlo(5, ClassicalInterpretation::Standard, 1000, 9).unwrap()
        );
    }

    #[test]
    fn scan_rejects_large_n() {
        assert!(matches!(
            conjecture_scan(9, Statistics::Boson),
            Err(Error::Capacity { .. })
        ));
    }
}
