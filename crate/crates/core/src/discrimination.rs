//! Helstrom bound and the Bayes-optimal guess from path-measurement
//! statistics.
//!
//! For priors `p, q` the optimal single-shot success probability is
//! `½ (1 + ‖p η − q η′‖₁)`, which at `p = q = ½` is `½ + ¼ ‖η − η′‖₁`.

use std::collections::BTreeMap;
use std::fmt;

use crate::error::{Error, Result};
use crate::linalg::{rank, symmetric_projector, trace_norm, DensityMatrix};
use crate::multiport::{
    dft_unitary, output_distribution, OutcomeDistribution, SpatialPattern, Statistics,
};
use crate::states::{rho_aligned, tau_mixed};

/// Tolerance on `p + q = 1`.
pub const PRIOR_TOL: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Label {
    H0,
    H1,
}

impl Label {
    pub fn other(self) -> Label {
        match self {
            Label::H0 => Label::H1,
            Label::H1 => Label::H0,
        }
    }
}

impl fmt::Display for Label {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Label::H0 => "H0",
            Label::H1 => "H1",
        })
    }
}

/// One of two candidate states with its prior.
#[derive(Debug, Clone)]
pub struct Hypothesis {
    pub label: Label,
    pub state: DensityMatrix,
    pub prior: f64,
}

impl Hypothesis {
    pub fn new(label: Label, state: DensityMatrix, prior: f64) -> Result<Self> {
        if !(0.0..=1.0).contains(&prior) {
            return Err(Error::invalid(format!("prior {prior} outside [0, 1]")));
        }
        Ok(Self {
            label,
            state,
            prior,
        })
    }
}

/// `(H0, H1)` with priors `prior0` and `1 - prior0`.
pub fn hypothesis_pair(
    s0: DensityMatrix,
    s1: DensityMatrix,
    prior0: f64,
) -> Result<(Hypothesis, Hypothesis)> {
    Ok((
        Hypothesis::new(Label::H0, s0, prior0)?,
        Hypothesis::new(Label::H1, s1, 1.0 - prior0)?,
    ))
}

fn check_pair(h0: &Hypothesis, h1: &Hypothesis) -> Result<()> {
    if h0.label == h1.label {
        return Err(Error::invalid("hypotheses must carry distinct labels"));
    }
    let total = h0.prior + h1.prior;
    if (total - 1.0).abs() > PRIOR_TOL {
        return Err(Error::invalid(format!("priors sum to {total}")));
    }
    if h0.state.dim() != h1.state.dim() {
        return Err(Error::DimensionMismatch {
            expected: h0.state.dim(),
            found: h1.state.dim(),
        });
    }
    Ok(())
}

/// Optimal probability of correctly naming which hypothesis was prepared.
pub fn helstrom(h0: &Hypothesis, h1: &Hypothesis) -> Result<f64> {
    check_pair(h0, h1)?;
    let diff = h0.state.matrix() * nalgebra::Complex::new(h0.prior, 0.0)
        - h1.state.matrix() * nalgebra::Complex::new(h1.prior, 0.0);
    Ok(0.5 * (1.0 + trace_norm(&diff)?))
}

/// `1 - (n+1)/2^(n+1)`.
pub fn aligned_vs_mixed_closed_form(n: usize) -> f64 {
    1.0 - (n as f64 + 1.0) / 2f64.powi(n as i32 + 1)
}

/// Helstrom probability for `ρ_n` against `τ_n` by the counting argument:
/// `ρ_n` lives in the symmetric subspace and is always recognised, while
/// `τ_n` is recognised whenever it falls outside it, with probability
/// `(d − d_S)/d`. `d_S` is the rank of the symmetric projector and `d` the
/// register dimension.
pub fn helstrom_aligned_vs_mixed(n: usize) -> Result<f64> {
    let projector = symmetric_projector(n)?;
    let d_sym = rank(&projector)? as f64;
    let d = projector.nrows() as f64;
    Ok(0.5 + 0.5 * (d - d_sym) / d)
}

/// Guess per spatial pattern.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Strategy(BTreeMap<SpatialPattern, Label>);

impl Strategy {
    pub fn guess(&self, pattern: &SpatialPattern) -> Option<Label> {
        self.0.get(pattern).copied()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&SpatialPattern, &Label)> {
        self.0.iter()
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// The strategy with every guess flipped.
    pub fn swapped(&self) -> Strategy {
        Strategy(self.0.iter().map(|(k, v)| (k.clone(), v.other())).collect())
    }
}

/// MAP rule: per pattern guess the larger of `p·P₀` and `q·P₁` (ties go to
/// `H0`). Returns the rule and its success probability `Σ max(p·P₀, q·P₁)`.
pub fn map_strategy(
    d0: &OutcomeDistribution,
    d1: &OutcomeDistribution,
    priors: (f64, f64),
) -> Result<(Strategy, f64)> {
    let (p, q) = priors;
    if !(0.0..=1.0).contains(&p) || !(0.0..=1.0).contains(&q) || (p + q - 1.0).abs() > PRIOR_TOL {
        return Err(Error::invalid(format!("invalid priors ({p}, {q})")));
    }
    if d0.n_arms() != d1.n_arms()
        || d0.n_particles() != d1.n_particles()
        || !d0.probabilities().keys().eq(d1.probabilities().keys())
    {
        return Err(Error::invalid(
            "distributions live on different pattern spaces",
        ));
    }
    let mut rule = BTreeMap::new();
    let mut success = 0.0;
    for (pattern, &p0) in d0.probabilities() {
        let a = p * p0;
        let b = q * d1.probability(pattern);
        if a >= b {
            rule.insert(pattern.clone(), Label::H0);
            success += a;
        } else {
            rule.insert(pattern.clone(), Label::H1);
            success += b;
        }
    }
    Ok((Strategy(rule), success))
}

/// Beam-splitter protocol performance next to the Helstrom bound.
#[derive(Debug, Clone)]
pub struct DiscriminationReport {
    pub n: usize,
    pub statistics: Statistics,
    pub priors: (f64, f64),
    pub p_helstrom: f64,
    pub p_bs: f64,
    /// `p_helstrom - p_bs`.
    pub gap: f64,
    pub strategy: Strategy,
    pub distributions: (OutcomeDistribution, OutcomeDistribution),
}

/// Sends both hypotheses through the `n`-port DFT beam splitter, one particle
/// per arm, and scores the MAP rule on the resulting pattern statistics.
pub fn beam_splitter_discrimination(
    h0: &Hypothesis,
    h1: &Hypothesis,
    statistics: Statistics,
) -> Result<DiscriminationReport> {
    check_pair(h0, h1)?;
    let n = h0
        .state
        .n_qubits()
        .ok_or_else(|| Error::invalid("hypothesis states must be qubit registers"))?;
    if h1.state.n_qubits() != Some(n) {
        return Err(Error::invalid("hypotheses differ in qubit count"));
    }
    let u = dft_unitary(n)?;
    let d0 = output_distribution(&h0.state, statistics, &u)?;
    let d1 = output_distribution(&h1.state, statistics, &u)?;
    let priors = (h0.prior, h1.prior);
    let (strategy, p_bs) = map_strategy(&d0, &d1, priors)?;
    // The report is always phrased with H0 first.
    let (strategy, priors) = if h0.label == Label::H0 {
        (strategy, priors)
    } else {
        (strategy.swapped(), (priors.1, priors.0))
    };
    let p_helstrom = helstrom(h0, h1)?;
    Ok(DiscriminationReport {
        n,
        statistics,
        priors,
        p_helstrom,
        p_bs,
        gap: p_helstrom - p_bs,
        strategy,
        distributions: (d0, d1),
    })
}

/// `ρ_n` (H0) against `τ_n` (H1) at equal priors.
pub fn aligned_vs_mixed_report(n: usize, statistics: Statistics) -> Result<DiscriminationReport> {
    let (h0, h1) = hypothesis_pair(rho_aligned(n)?, tau_mixed(n)?, 0.5)?;
    beam_splitter_discrimination(&h0, &h1, statistics)
}
