//! Internal (spin) states of the particles.
//!
//! The production constructors are closed forms. The direction-averaged
//! definitions are available through [`quadrature_average`] and the two
//! integrands [`aligned_integrand`] and [`antialigned_integrand`]; these are
//! only used to cross-check the closed forms.

use std::f64::consts::PI;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::linalg::{
    c, c_re, kron, projector, swap_operator, symmetric_projector, ComplexMatrix, ComplexVector,
    DensityMatrix, C64,
};

/// A direction on the Bloch sphere.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BlochDirection {
    theta: f64,
    phi: f64,
}

impl BlochDirection {
    /// `theta ∈ [0, π]`, `phi ∈ [0, 2π)`.
    pub fn new(theta: f64, phi: f64) -> Result<Self> {
        if !(0.0..=PI).contains(&theta) {
            return Err(Error::invalid(format!("theta = {theta} outside [0, pi]")));
        }
        if !(0.0..2.0 * PI).contains(&phi) {
            return Err(Error::invalid(format!("phi = {phi} outside [0, 2pi)")));
        }
        Ok(Self { theta, phi })
    }

    pub fn theta(&self) -> f64 {
        self.theta
    }

    pub fn phi(&self) -> f64 {
        self.phi
    }

    /// Unit vector `(sin θ cos φ, sin θ sin φ, cos θ)`.
    pub fn unit_vector(&self) -> [f64; 3] {
        let (st, ct) = self.theta.sin_cos();
        let (sp, cp) = self.phi.sin_cos();
        [st * cp, st * sp, ct]
    }
}

/// A normalized single-qubit pure state.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PureQubit {
    amplitudes: [C64; 2],
}

impl PureQubit {
    pub fn new(a0: C64, a1: C64) -> Result<Self> {
        let norm = (a0.norm_sqr() + a1.norm_sqr()).sqrt();
        if (norm - 1.0).abs() > 1e-12 {
            return Err(Error::invalid(format!("qubit norm {norm} is not 1")));
        }
        Ok(Self {
            amplitudes: [a0, a1],
        })
    }

    pub fn amplitudes(&self) -> [C64; 2] {
        self.amplitudes
    }

    pub fn to_vector(&self) -> ComplexVector {
        ComplexVector::from_column_slice(&self.amplitudes)
    }

    pub fn projector(&self) -> ComplexMatrix {
        projector(&self.to_vector())
    }

    pub fn inner(&self, other: &PureQubit) -> C64 {
        self.amplitudes[0].conj() * other.amplitudes[0]
            + self.amplitudes[1].conj() * other.amplitudes[1]
    }

    /// The orthogonal state `(-conj(a1), conj(a0))`.
    pub fn orthogonal(&self) -> PureQubit {
        let [a0, a1] = self.amplitudes;
        PureQubit {
            amplitudes: [-a1.conj(), a0.conj()],
        }
    }
}

/// Spin-up along `omega`: `(cos(θ/2), e^{iφ} sin(θ/2))`.
pub fn bloch_state(omega: BlochDirection) -> PureQubit {
    let half = omega.theta / 2.0;
    PureQubit {
        amplitudes: [c_re(half.cos()), C64::from_polar(half.sin(), omega.phi)],
    }
}

/// Spin-down along `omega`.
pub fn orthogonal_state(omega: BlochDirection) -> PureQubit {
    bloch_state(omega).orthogonal()
}

/// `n` aligned spins pointing in an unknown direction: the normalized
/// projector onto the symmetric subspace, `P_sym / (n + 1)`.
pub fn rho_aligned(n: usize) -> Result<DensityMatrix> {
    let p = symmetric_projector(n)?;
    DensityMatrix::qubits(p / c_re((n + 1) as f64), n)
}

/// Two anti-aligned spins in an unknown direction: `I/3 - SWAP/6`.
///
/// Weight 1/2 on the singlet and 1/6 on each triplet state.
pub fn sigma_antialigned() -> DensityMatrix {
    let m = ComplexMatrix::identity(4, 4) / c_re(3.0) - swap_operator() / c_re(6.0);
    DensityMatrix::qubits(m, 2).expect("closed form is a valid state")
}

/// `n` independent maximally mixed qubits, `I / 2^n`.
pub fn tau_mixed(n: usize) -> Result<DensityMatrix> {
    if n == 0 {
        return Err(Error::invalid("need at least one qubit"));
    }
    DensityMatrix::maximally_mixed(vec![2; n])
}

/// Orthonormal Dicke basis of the symmetric subspace of `n` qubits.
#[derive(Debug, Clone)]
pub struct DickeBasis {
    n_qubits: usize,
    vectors: Vec<ComplexVector>,
}

impl DickeBasis {
    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    /// Vectors ordered by Hamming weight `0..=n`.
    pub fn vectors(&self) -> &[ComplexVector] {
        &self.vectors
    }

    /// `Σ_w |D_w⟩⟨D_w|`.
    pub fn projector(&self) -> ComplexMatrix {
        let dim = 1usize << self.n_qubits;
        self.vectors
            .iter()
            .fold(ComplexMatrix::zeros(dim, dim), |acc, v| acc + projector(v))
    }
}

/// Dicke states: the uniform superposition of all computational basis states
/// of each Hamming weight.
pub fn dicke_basis(n: usize) -> Result<DickeBasis> {
    if n == 0 || n > 16 {
        return Err(Error::invalid(format!("dicke basis for {n} qubits")));
    }
    let dim = 1usize << n;
    let vectors = (0..=n as u32)
        .map(|w| {
            let members: Vec<usize> = (0..dim).filter(|x| x.count_ones() == w).collect();
            let amp = c_re(1.0 / (members.len() as f64).sqrt());
            let mut v = ComplexVector::zeros(dim);
            for x in members {
                v[x] = amp;
            }
            v
        })
        .collect();
    Ok(DickeBasis {
        n_qubits: n,
        vectors,
    })
}

/// Node set for averaging over the unit sphere.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum QuadratureScheme {
    /// Seeded i.i.d. uniform directions.
    MonteCarlo { nodes: usize, seed: u64 },
    /// Gauss-Legendre in `cos θ` times the trapezoid rule in `φ`. Exact for
    /// integrands that are polynomials of degree `< 2 * polar` in the Bloch
    /// vector components, provided `azimuthal` exceeds that degree.
    GaussProduct { polar: usize, azimuthal: usize },
}

impl Default for QuadratureScheme {
    /// 100 x 100 product rule (10⁴ nodes).
    fn default() -> Self {
        QuadratureScheme::GaussProduct {
            polar: 100,
            azimuthal: 100,
        }
    }
}

impl QuadratureScheme {
    /// Nodes and weights; weights sum to one.
    pub fn nodes(&self) -> Result<Vec<(BlochDirection, f64)>> {
        match *self {
            QuadratureScheme::MonteCarlo { nodes, seed } => {
                if nodes == 0 {
                    return Err(Error::invalid("quadrature needs at least one node"));
                }
                let mut rng = ChaCha8Rng::seed_from_u64(seed);
                let w = 1.0 / nodes as f64;
                Ok((0..nodes)
                    .map(|_| {
                        let z: f64 = rng.random_range(-1.0..=1.0);
                        let phi: f64 = rng.random_range(0.0..2.0 * PI);
                        (
                            BlochDirection {
                                theta: z.acos(),
                                phi,
                            },
                            w,
                        )
                    })
                    .collect())
            }
            QuadratureScheme::GaussProduct { polar, azimuthal } => {
                if polar == 0 || azimuthal == 0 {
                    return Err(Error::invalid("quadrature needs at least one node"));
                }
                let (xs, ws) = gauss_legendre(polar);
                let mut out = Vec::with_capacity(polar * azimuthal);
                for (x, wx) in xs.iter().zip(&ws) {
                    for k in 0..azimuthal {
                        let phi = 2.0 * PI * k as f64 / azimuthal as f64;
                        // Legendre weights sum to 2 over [-1, 1].
                        out.push((
                            BlochDirection {
                                theta: x.clamp(-1.0, 1.0).acos(),
                                phi,
                            },
                            wx / 2.0 / azimuthal as f64,
                        ));
                    }
                }
                Ok(out)
            }
        }
    }
}

/// Gauss-Legendre nodes and weights on `[-1, 1]`, by Newton iteration on the
/// three-term recurrence.
pub fn gauss_legendre(n: usize) -> (Vec<f64>, Vec<f64>) {
    let mut xs = vec![0.0; n];
    let mut ws = vec![0.0; n];
    let nf = n as f64;
    for i in 0..n.div_ceil(2) {
        let mut x = (PI * (i as f64 + 0.75) / (nf + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            let (mut p0, mut p1) = (1.0, x);
            for k in 2..=n {
                let kf = k as f64;
                let p2 = ((2.0 * kf - 1.0) * x * p1 - (kf - 1.0) * p0) / kf;
                p0 = p1;
                p1 = p2;
            }
            dp = nf * (x * p1 - p0) / (x * x - 1.0);
            let dx = p1 / dp;
            x -= dx;
            if dx.abs() < 1e-16 {
                break;
            }
        }
        let w = 2.0 / ((1.0 - x * x) * dp * dp);
        xs[i] = x;
        ws[i] = w;
        xs[n - 1 - i] = -x;
        ws[n - 1 - i] = w;
    }
    (xs, ws)
}

/// Weighted average of `builder(Ω)` over the sphere.
pub fn quadrature_average<F>(builder: F, scheme: QuadratureScheme) -> Result<DensityMatrix>
where
    F: Fn(BlochDirection) -> DensityMatrix,
{
    let nodes = scheme.nodes()?;
    let first = builder(nodes[0].0);
    let dim = first.dim();
    let shape = first.factor_shape().to_vec();
    let mut acc = ComplexMatrix::zeros(dim, dim);
    // Fixed summation order keeps the result bit-stable.
    for (omega, w) in nodes {
        acc += builder(omega).matrix() * c_re(w);
    }
    DensityMatrix::new(acc, shape)
}

/// `(|Ω⟩⟨Ω|)^{⊗n}`.
pub fn aligned_integrand(n: usize) -> impl Fn(BlochDirection) -> DensityMatrix {
    move |omega| {
        let p = bloch_state(omega).projector();
        let mut m = p.clone();
        for _ in 1..n {
            m = kron(&m, &p);
        }
        DensityMatrix::qubits(m, n).expect("product of pure projectors")
    }
}

/// `|Ω⟩⟨Ω| ⊗ |Ω⊥⟩⟨Ω⊥|`.
pub fn antialigned_integrand() -> impl Fn(BlochDirection) -> DensityMatrix {
    |omega| {
        let m = kron(
            &bloch_state(omega).projector(),
            &orthogonal_state(omega).projector(),
        );
        DensityMatrix::qubits(m, 2).expect("product of pure projectors")
    }
}

/// Random single-qubit unitary from a seeded generator, uniform over SU(2)
/// via a normalized quaternion.
pub fn random_su2<R: Rng>(rng: &mut R) -> ComplexMatrix {
    let mut q = [0.0f64; 4];
    loop {
        for v in &mut q {
            *v = rng.random_range(-1.0..1.0);
        }
        let n2: f64 = q.iter().map(|v| v * v).sum();
        if n2 > 1e-6 && n2 <= 1.0 {
            let n = n2.sqrt();
            for v in &mut q {
                *v /= n;
            }
            break;
        }
    }
    let a = c(q[0], q[1]);
    let b = c(q[2], q[3]);
    ComplexMatrix::from_row_slice(2, 2, &[a, -b.conj(), b, a.conj()])
}
