//! Identical particles through a balanced multiport beam splitter.
//!
//! Each particle occupies one of `2 * n_arms` modes labelled `(arm, spin)`,
//! flattened arm-major as `mode = 2 * arm + spin`. A Fock basis state is
//! defined as the product of creation operators in ascending mode order
//! acting on the vacuum,
//!
//! ```text
//! |n⟩ = Π_m (a†_m)^{n_m} / √(n_m!) |vac⟩   (m ascending)
//! ```
//!
//! and every fermionic sign in this module follows from that ordering.
//!
//! The beam splitter maps `a†_{m,s} → Σ_j u_{mj} a†_{j,s}`; [`evolve`]
//! expands the resulting product of creation operators directly.
//! [`first_quantized_oracle`] computes the same pattern distribution from an
//! explicitly (anti)symmetrized tensor-product wavefunction and shares no
//! code with the second-quantized path.

use std::collections::BTreeMap;
use std::f64::consts::PI;
use std::fmt;

use itertools::Itertools;

use crate::error::{Error, Result};
use crate::linalg::{c_re, ComplexMatrix, ComplexVector, DensityMatrix, C64};

/// Largest arm count the packed occupation representation supports.
pub const MAX_ARMS: usize = 8;

/// Exchange statistics of the particles.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Statistics {
    Boson,
    Fermion,
}

impl Statistics {
    pub const ALL: [Statistics; 2] = [Statistics::Boson, Statistics::Fermion];

    pub fn name(&self) -> &'static str {
        match self {
            Statistics::Boson => "boson",
            Statistics::Fermion => "fermion",
        }
    }
}

impl fmt::Display for Statistics {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl std::str::FromStr for Statistics {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "boson" | "bosons" => Ok(Statistics::Boson),
            "fermion" | "fermions" => Ok(Statistics::Fermion),
            other => Err(Error::invalid(format!("unknown statistics '{other}'"))),
        }
    }
}

/// A balanced unitary on the spatial modes.
#[derive(Debug, Clone, PartialEq)]
pub struct MultiportUnitary {
    matrix: ComplexMatrix,
}

impl MultiportUnitary {
    /// `u_mn = e^{2πi·m·n/N} / √N` with 0-based `m, n`.
    pub fn dft(n: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::invalid("multiport needs at least one arm"));
        }
        let scale = 1.0 / (n as f64).sqrt();
        let matrix = ComplexMatrix::from_fn(n, n, |m, k| {
            // Reduce the exponent mod n before scaling to keep phases exact.
            let phase = 2.0 * PI * ((m * k) % n) as f64 / n as f64;
            C64::from_polar(scale, phase)
        });
        Ok(Self { matrix })
    }

    /// The symmetric 50/50 convention `[[1, i], [i, 1]] / √2`.
    pub fn symmetric_two_port() -> Self {
        let s = 1.0 / 2f64.sqrt();
        let matrix = ComplexMatrix::from_row_slice(
            2,
            2,
            &[c_re(s), C64::new(0.0, s), C64::new(0.0, s), c_re(s)],
        );
        Self { matrix }
    }

    /// Accepts any unitary with all moduli equal to `1/√N` (tolerance 1e-12).
    pub fn from_matrix(matrix: ComplexMatrix) -> Result<Self> {
        let n = matrix.nrows();
        if n == 0 || matrix.ncols() != n {
            return Err(Error::invalid(
                "multiport matrix must be square and non-empty",
            ));
        }
        let u = Self { matrix };
        let dev = u.unitarity_deviation();
        if dev > 1e-12 {
            return Err(Error::invalid(format!(
                "matrix is not unitary (deviation {dev:e})"
            )));
        }
        let target = 1.0 / (n as f64).sqrt();
        if u.matrix.iter().any(|z| (z.norm() - target).abs() > 1e-12) {
            return Err(Error::invalid("multiport is not balanced"));
        }
        Ok(u)
    }

    pub fn n(&self) -> usize {
        self.matrix.nrows()
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.matrix
    }

    /// Largest entry of `|U†U - I|`.
    pub fn unitarity_deviation(&self) -> f64 {
        let n = self.n();
        let prod = self.matrix.adjoint() * &self.matrix;
        let id = ComplexMatrix::identity(n, n);
        prod.iter()
            .zip(id.iter())
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }
}

/// Shorthand for [`MultiportUnitary::dft`].
pub fn dft_unitary(n: usize) -> Result<MultiportUnitary> {
    MultiportUnitary::dft(n)
}

/// Occupation numbers of up to 16 modes, four bits per mode.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct Occupation(u64);

impl Occupation {
    pub const EMPTY: Occupation = Occupation(0);

    pub fn from_counts(counts: &[u8]) -> Result<Self> {
        if counts.len() > 2 * MAX_ARMS {
            return Err(Error::invalid(format!("{} modes exceed 16", counts.len())));
        }
        let mut bits = 0u64;
        for (m, &k) in counts.iter().enumerate() {
            if k > 15 {
                return Err(Error::invalid("mode occupancy above 15"));
            }
            bits |= (k as u64) << (4 * m);
        }
        Ok(Occupation(bits))
    }

    #[inline]
    pub fn get(self, mode: usize) -> u8 {
        ((self.0 >> (4 * mode)) & 0xf) as u8
    }

    #[inline]
    fn add(self, mode: usize) -> Self {
        Occupation(self.0 + (1u64 << (4 * mode)))
    }

    #[inline]
    fn remove(self, mode: usize) -> Self {
        Occupation(self.0 - (1u64 << (4 * mode)))
    }

    /// Occupied modes strictly below `mode`.
    #[inline]
    fn count_below(self, mode: usize) -> u32 {
        let mask = (1u64 << (4 * mode)) - 1;
        let below = self.0 & mask;
        (0..mode).map(|m| ((below >> (4 * m)) & 0xf) as u32).sum()
    }

    fn highest_occupied(self) -> Option<usize> {
        (self.0 != 0).then(|| (63 - self.0.leading_zeros() as usize) / 4)
    }

    pub fn total(self) -> u32 {
        (0..16).map(|m| self.get(m) as u32).sum()
    }

    pub fn counts(self, n_modes: usize) -> Vec<u8> {
        (0..n_modes).map(|m| self.get(m)).collect()
    }

    /// Per-arm totals, spin summed out.
    pub fn spatial_pattern(self, n_arms: usize) -> SpatialPattern {
        SpatialPattern(
            (0..n_arms)
                .map(|a| self.get(2 * a) + self.get(2 * a + 1))
                .collect(),
        )
    }
}

/// Per-arm particle counts observed by a path measurement.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct SpatialPattern(pub Vec<u8>);

impl SpatialPattern {
    pub fn counts(&self) -> &[u8] {
        &self.0
    }

    pub fn n_particles(&self) -> usize {
        self.0.iter().map(|&k| k as usize).sum()
    }

    /// All particles in one arm.
    pub fn is_fully_bunched(&self) -> bool {
        self.0.iter().filter(|&&k| k > 0).count() == 1
    }

    /// No two particles share an arm.
    pub fn is_antibunched(&self) -> bool {
        self.0.iter().all(|&k| k <= 1)
    }

    /// Every composition of `n_particles` into `n_arms` ordered parts, in
    /// lexicographic order.
    pub fn all(n_arms: usize, n_particles: usize) -> Vec<SpatialPattern> {
        fn rec(arms_left: usize, left: usize, cur: &mut Vec<u8>, out: &mut Vec<SpatialPattern>) {
            if arms_left == 1 {
                cur.push(left as u8);
                out.push(SpatialPattern(cur.clone()));
                cur.pop();
                return;
            }
            for k in 0..=left {
                cur.push(k as u8);
                rec(arms_left - 1, left - k, cur, out);
                cur.pop();
            }
        }
        let mut out = Vec::new();
        if n_arms > 0 {
            rec(n_arms, n_particles, &mut Vec::new(), &mut out);
        }
        out
    }
}

impl fmt::Display for SpatialPattern {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({})", self.0.iter().join(","))
    }
}

/// Normalized superposition of Fock configurations over `(arm, spin)` modes.
#[derive(Debug, Clone, PartialEq)]
pub struct FockState {
    statistics: Statistics,
    n_arms: usize,
    n_particles: usize,
    amplitudes: BTreeMap<Occupation, C64>,
}

impl FockState {
    /// Checks particle number, fermionic occupancy and normalization
    /// (within 1e-12).
    pub fn new(
        statistics: Statistics,
        n_arms: usize,
        n_particles: usize,
        amplitudes: BTreeMap<Occupation, C64>,
    ) -> Result<Self> {
        if n_arms == 0 || n_arms > MAX_ARMS {
            return Err(Error::invalid(format!(
                "{n_arms} arms outside 1..={MAX_ARMS}"
            )));
        }
        let n_modes = 2 * n_arms;
        for occ in amplitudes.keys() {
            if occ.total() as usize != n_particles {
                return Err(Error::invalid(
                    "configuration has the wrong particle number",
                ));
            }
            if (n_modes..16).any(|m| occ.get(m) != 0) {
                return Err(Error::invalid(
                    "configuration occupies a mode beyond the last arm",
                ));
            }
            if statistics == Statistics::Fermion && (0..n_modes).any(|m| occ.get(m) > 1) {
                return Err(Error::invalid("fermionic mode occupied twice"));
            }
        }
        let norm: f64 = amplitudes.values().map(|a| a.norm_sqr()).sum();
        if (norm - 1.0).abs() > 1e-12 {
            return Err(Error::invalid(format!("squared amplitudes sum to {norm}")));
        }
        Ok(Self {
            statistics,
            n_arms,
            n_particles,
            amplitudes,
        })
    }

    pub fn statistics(&self) -> Statistics {
        self.statistics
    }

    pub fn n_arms(&self) -> usize {
        self.n_arms
    }

    pub fn n_particles(&self) -> usize {
        self.n_particles
    }

    pub fn amplitudes(&self) -> &BTreeMap<Occupation, C64> {
        &self.amplitudes
    }

    pub fn amplitude(&self, occ: Occupation) -> C64 {
        self.amplitudes.get(&occ).copied().unwrap_or_default()
    }
}

/// Weighted mixture of Fock states sharing statistics and arm count.
#[derive(Debug, Clone)]
pub struct FockEnsemble {
    members: Vec<(f64, FockState)>,
}

impl FockEnsemble {
    pub fn new(members: Vec<(f64, FockState)>) -> Result<Self> {
        let Some((_, first)) = members.first() else {
            return Err(Error::invalid("empty ensemble"));
        };
        let (stats, arms, np) = (first.statistics, first.n_arms, first.n_particles);
        if members
            .iter()
            .any(|(_, s)| s.statistics != stats || s.n_arms != arms || s.n_particles != np)
        {
            return Err(Error::invalid(
                "ensemble members disagree on statistics or size",
            ));
        }
        if members.iter().any(|(w, _)| !(*w >= 0.0 && w.is_finite())) {
            return Err(Error::invalid("ensemble weights must be non-negative"));
        }
        let total: f64 = members.iter().map(|(w, _)| w).sum();
        if (total - 1.0).abs() > 1e-12 {
            return Err(Error::invalid(format!("ensemble weights sum to {total}")));
        }
        Ok(Self { members })
    }

    pub fn members(&self) -> &[(f64, FockState)] {
        &self.members
    }

    pub fn statistics(&self) -> Statistics {
        self.members[0].1.statistics
    }

    pub fn n_arms(&self) -> usize {
        self.members[0].1.n_arms
    }

    pub fn n_particles(&self) -> usize {
        self.members[0].1.n_particles
    }

    /// Propagates every member through `u`.
    pub fn evolve(&self, u: &MultiportUnitary) -> Result<FockEnsemble> {
        let members = self
            .members
            .iter()
            .map(|(w, s)| evolve(s, u).map(|out| (*w, out)))
            .collect::<Result<Vec<_>>>()?;
        Ok(FockEnsemble { members })
    }
}

impl From<FockState> for FockEnsemble {
    fn from(state: FockState) -> Self {
        FockEnsemble {
            members: vec![(1.0, state)],
        }
    }
}

fn arms_for_dim(dim: usize) -> Result<usize> {
    if dim < 2 || !dim.is_power_of_two() {
        return Err(Error::invalid(format!(
            "internal dimension {dim} is not 2^n with n >= 1"
        )));
    }
    let n = dim.trailing_zeros() as usize;
    if n > MAX_ARMS {
        return Err(Error::Capacity {
            what: "multiport simulation",
            n,
            max: MAX_ARMS,
            hint: "",
        });
    }
    Ok(n)
}

/// One particle per input arm; particle `k` carries qubit factor `k` of
/// `internal`. The amplitude of `|s_1…s_n⟩` becomes the amplitude of
/// `a†_{1,s_1}···a†_{n,s_n}|vac⟩`.
pub fn prepare_pure(internal: &ComplexVector, statistics: Statistics) -> Result<FockState> {
    let n = arms_for_dim(internal.len())?;
    let norm = internal.norm();
    if !(norm > 0.0 && norm.is_finite()) {
        return Err(Error::invalid("internal state has zero or non-finite norm"));
    }
    let mut amplitudes = BTreeMap::new();
    for (s, &amp) in internal.iter().enumerate() {
        if amp == C64::default() {
            continue;
        }
        let mut occ = Occupation::EMPTY;
        for arm in 0..n {
            let spin = (s >> (n - 1 - arm)) & 1;
            occ = occ.add(2 * arm + spin);
        }
        amplitudes.insert(occ, amp / c_re(norm));
    }
    FockState::new(statistics, n, n, amplitudes)
}

/// Mixed internal state as an eigen-ensemble of Fock states.
pub fn prepare_input(internal: &DensityMatrix, statistics: Statistics) -> Result<FockEnsemble> {
    if internal.n_qubits().is_none() {
        return Err(Error::invalid(
            "internal state must be a register of qubits",
        ));
    }
    arms_for_dim(internal.dim())?;
    let members = internal
        .eigen_ensemble()?
        .into_iter()
        .map(|(w, v)| prepare_pure(&v, statistics).map(|s| (w, s)))
        .collect::<Result<Vec<_>>>()?;
    FockEnsemble::new(members)
}

/// `a†_mode |occ⟩` as `(factor, new configuration)`, or `None` when a
/// fermionic mode is already filled.
#[inline]
fn create(occ: Occupation, mode: usize, statistics: Statistics) -> Option<(f64, Occupation)> {
    let k = occ.get(mode);
    match statistics {
        Statistics::Boson => Some((((k + 1) as f64).sqrt(), occ.add(mode))),
        Statistics::Fermion => {
            if k > 0 {
                None
            } else {
                let sign = if occ.count_below(mode).is_multiple_of(2) {
                    1.0
                } else {
                    -1.0
                };
                Some((sign, occ.add(mode)))
            }
        }
    }
}

fn factorial(k: u8) -> f64 {
    (1..=k as u32).map(f64::from).product()
}

/// Passes `input` through `u`.
///
/// Every input configuration is rewritten as its ordered product of creation
/// operators. Operators are applied to the vacuum from the highest mode
/// downwards, each replaced by its image `Σ_j u_{mj} a†_{j,s}`. Partial
/// products are keyed by the not-yet-applied part of the input together with
/// the output built so far, so branches from different input configurations
/// merge as soon as they coincide.
pub fn evolve(input: &FockState, u: &MultiportUnitary) -> Result<FockState> {
    let n_arms = input.n_arms;
    if u.n() != n_arms {
        return Err(Error::DimensionMismatch {
            expected: n_arms,
            found: u.n(),
        });
    }
    let stats = input.statistics;
    let mut pending: BTreeMap<(Occupation, Occupation), C64> = BTreeMap::new();
    for (&occ, &amp) in &input.amplitudes {
        let norm = match stats {
            Statistics::Boson => (0..2 * n_arms)
                .map(|m| factorial(occ.get(m)))
                .product::<f64>()
                .sqrt(),
            Statistics::Fermion => 1.0,
        };
        *pending.entry((occ, Occupation::EMPTY)).or_default() += amp / c_re(norm);
    }

    for _ in 0..input.n_particles {
        let mut next: BTreeMap<(Occupation, Occupation), C64> = BTreeMap::new();
        for ((rest, out), amp) in pending {
            let mode = rest
                .highest_occupied()
                .expect("every configuration holds n_particles");
            let rest = rest.remove(mode);
            let (arm, spin) = (mode / 2, mode % 2);
            for j in 0..n_arms {
                let coeff = u.matrix[(arm, j)];
                if let Some((factor, new_out)) = create(out, 2 * j + spin, stats) {
                    *next.entry((rest, new_out)).or_default() += amp * coeff * c_re(factor);
                }
            }
        }
        pending = next;
    }

    let amplitudes: BTreeMap<Occupation, C64> = pending
        .into_iter()
        .map(|((_, out), amp)| (out, amp))
        .collect();
    let norm: f64 = amplitudes.values().map(|a| a.norm_sqr()).sum();
    if (norm - 1.0).abs() > 1e-12 {
        return Err(Error::invalid(format!(
            "evolution lost normalization ({norm}); is the multiport unitary?"
        )));
    }
    FockState::new(stats, n_arms, input.n_particles, amplitudes)
}

/// Probabilities over spatial patterns. The map always covers the full
/// pattern space (every composition of the particle number over the arms),
/// including patterns of probability zero.
#[derive(Debug, Clone, PartialEq)]
pub struct OutcomeDistribution {
    n_arms: usize,
    n_particles: usize,
    probabilities: BTreeMap<SpatialPattern, f64>,
}

impl OutcomeDistribution {
    /// Fills missing patterns with zero; rejects negative entries and totals
    /// off by more than 1e-10.
    pub fn new(
        n_arms: usize,
        n_particles: usize,
        probabilities: BTreeMap<SpatialPattern, f64>,
    ) -> Result<Self> {
        let mut full: BTreeMap<SpatialPattern, f64> = SpatialPattern::all(n_arms, n_particles)
            .into_iter()
            .map(|p| (p, 0.0))
            .collect();
        for (pattern, p) in probabilities {
            if !(p >= 0.0 && p.is_finite()) {
                return Err(Error::invalid(format!("probability {p} for {pattern}")));
            }
            match full.get_mut(&pattern) {
                Some(slot) => *slot += p,
                None => {
                    return Err(Error::invalid(format!(
                        "pattern {pattern} not in the space of {n_particles} particles over {n_arms} arms"
                    )))
                }
            }
        }
        let total: f64 = full.values().sum();
        if (total - 1.0).abs() > 1e-10 {
            return Err(Error::invalid(format!("probabilities sum to {total}")));
        }
        Ok(Self {
            n_arms,
            n_particles,
            probabilities: full,
        })
    }

    pub fn n_arms(&self) -> usize {
        self.n_arms
    }

    pub fn n_particles(&self) -> usize {
        self.n_particles
    }

    pub fn probabilities(&self) -> &BTreeMap<SpatialPattern, f64> {
        &self.probabilities
    }

    pub fn probability(&self, pattern: &SpatialPattern) -> f64 {
        self.probabilities.get(pattern).copied().unwrap_or(0.0)
    }

    pub fn total(&self) -> f64 {
        self.probabilities.values().sum()
    }

    /// Probability that all particles leave through one arm.
    pub fn bunching(&self) -> f64 {
        self.sum_where(SpatialPattern::is_fully_bunched)
    }

    /// Probability that no two particles share an arm.
    pub fn antibunching(&self) -> f64 {
        self.sum_where(SpatialPattern::is_antibunched)
    }

    fn sum_where(&self, pred: impl Fn(&SpatialPattern) -> bool) -> f64 {
        self.probabilities
            .iter()
            .filter(|(k, _)| pred(k))
            .map(|(_, p)| p)
            .sum()
    }

    /// Largest absolute probability difference over the union of patterns.
    pub fn max_abs_diff(&self, other: &OutcomeDistribution) -> f64 {
        self.probabilities
            .keys()
            .chain(other.probabilities.keys())
            .map(|k| (self.probability(k) - other.probability(k)).abs())
            .fold(0.0, f64::max)
    }
}

/// Path-measurement statistics of an ensemble with the spin traced out.
pub fn spatial_distribution(ensemble: &FockEnsemble) -> Result<OutcomeDistribution> {
    let n_arms = ensemble.n_arms();
    let mut probs: BTreeMap<SpatialPattern, f64> = BTreeMap::new();
    for (w, state) in ensemble.members() {
        for (occ, amp) in &state.amplitudes {
            *probs.entry(occ.spatial_pattern(n_arms)).or_default() += w * amp.norm_sqr();
        }
    }
    OutcomeDistribution::new(n_arms, ensemble.n_particles(), probs)
}

/// `prepare_input → evolve → spatial_distribution` for a mixed internal
/// state.
pub fn output_distribution(
    internal: &DensityMatrix,
    statistics: Statistics,
    u: &MultiportUnitary,
) -> Result<OutcomeDistribution> {
    let ensemble = prepare_input(internal, statistics)?;
    if u.n() != ensemble.n_arms() {
        return Err(Error::DimensionMismatch {
            expected: ensemble.n_arms(),
            found: u.n(),
        });
    }
    spatial_distribution(&ensemble.evolve(u)?)
}

/// Largest particle number the first-quantized oracle accepts.
pub const MAX_ORACLE_PARTICLES: usize = 5;

/// Pattern distribution from an explicit `N`-particle wavefunction.
///
/// The product state `Σ_s c_s |1,s_1⟩⊗…⊗|N,s_N⟩` on `(2N)^N` amplitudes is
/// (anti)symmetrized by summing over all `N!` particle permutations, each
/// particle's arm is transformed by `u`, and the arm-count pattern
/// probabilities are read off by summing `|ψ|²` over labelled tuples.
pub fn first_quantized_oracle(
    internal: &ComplexVector,
    statistics: Statistics,
    u: &MultiportUnitary,
) -> Result<OutcomeDistribution> {
    let n = arms_for_dim(internal.len())?;
    if n > MAX_ORACLE_PARTICLES {
        return Err(Error::Capacity {
            what: "first-quantized oracle",
            n,
            max: MAX_ORACLE_PARTICLES,
            hint: "",
        });
    }
    if u.n() != n {
        return Err(Error::DimensionMismatch {
            expected: n,
            found: u.n(),
        });
    }
    let d = 2 * n;
    let size = d.pow(n as u32);
    let digits = |idx: usize| -> Vec<usize> {
        let mut out = vec![0; n];
        let mut rem = idx;
        for k in (0..n).rev() {
            out[k] = rem % d;
            rem /= d;
        }
        out
    };
    let index = |ds: &[usize]| ds.iter().fold(0, |acc, &x| acc * d + x);

    // Distinguishable product state, particle k in arm k.
    let mut psi = vec![C64::default(); size];
    for (s, &amp) in internal.iter().enumerate() {
        let ds: Vec<usize> = (0..n).map(|k| 2 * k + ((s >> (n - 1 - k)) & 1)).collect();
        psi[index(&ds)] += amp;
    }

    // (Anti)symmetrize.
    let mut sym = vec![C64::default(); size];
    for perm in (0..n).permutations(n) {
        let inversions = (0..n)
            .flat_map(|i| (i + 1..n).map(move |j| (i, j)))
            .filter(|&(i, j)| perm[i] > perm[j])
            .count();
        let sign = match statistics {
            Statistics::Fermion if inversions % 2 == 1 => -1.0,
            _ => 1.0,
        };
        for (idx, &amp) in psi.iter().enumerate() {
            if amp == C64::default() {
                continue;
            }
            let ds = digits(idx);
            let permuted: Vec<usize> = (0..n).map(|k| ds[perm[k]]).collect();
            sym[index(&permuted)] += amp * c_re(sign);
        }
    }

    // U on each particle's arm label.
    for k in 0..n {
        let stride = d.pow((n - 1 - k) as u32);
        let mut next = vec![C64::default(); size];
        for (idx, &amp) in sym.iter().enumerate() {
            if amp == C64::default() {
                continue;
            }
            let x = (idx / stride) % d;
            let (arm, spin) = (x / 2, x % 2);
            let base = idx - x * stride;
            for j in 0..n {
                next[base + (2 * j + spin) * stride] += amp * u.matrix[(arm, j)];
            }
        }
        sym = next;
    }

    let norm: f64 = sym.iter().map(|a| a.norm_sqr()).sum();
    if norm.is_nan() || norm <= 0.0 {
        return Err(Error::invalid("symmetrized state vanishes"));
    }
    let mut probs: BTreeMap<SpatialPattern, f64> = BTreeMap::new();
    for (idx, amp) in sym.iter().enumerate() {
        let p = amp.norm_sqr();
        if p == 0.0 {
            continue;
        }
        let mut counts = vec![0u8; n];
        for x in digits(idx) {
            counts[x / 2] += 1;
        }
        *probs.entry(SpatialPattern(counts)).or_default() += p / norm;
    }
    OutcomeDistribution::new(n, n, probs)
}

/// Oracle counterpart of [`output_distribution`] for mixed internal states.
pub fn first_quantized_mixed(
    internal: &DensityMatrix,
    statistics: Statistics,
    u: &MultiportUnitary,
) -> Result<OutcomeDistribution> {
    let n = arms_for_dim(internal.dim())?;
    let mut probs: BTreeMap<SpatialPattern, f64> = BTreeMap::new();
    for (w, v) in internal.eigen_ensemble()? {
        let d = first_quantized_oracle(&v, statistics, u)?;
        for (k, p) in d.probabilities {
            *probs.entry(k).or_default() += w * p;
        }
    }
    OutcomeDistribution::new(n, n, probs)
}
