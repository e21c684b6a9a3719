use serde::Serialize;
use serde_json::{json, Value};

use statdisc::applications::{
    classical_pauli_monte_carlo, classical_pauli_report, conjecture_scan,
    entanglement_detection_report, purify_symmetric, ClassicalInterpretation, TwoQubitPureState,
};
use statdisc::discrimination::{
    aligned_vs_mixed_closed_form, beam_splitter_discrimination, helstrom, hypothesis_pair,
    Hypothesis,
};
use statdisc::linalg::{max_abs_diff, ComplexVector, DensityMatrix};
use statdisc::multiport::{dft_unitary, evolve, prepare_pure, spatial_distribution};
use statdisc::states::{
    aligned_integrand, antialigned_integrand, quadrature_average, rho_aligned, sigma_antialigned,
    tau_mixed, QuadratureScheme,
};
use statdisc::{Statistics, C64};

use crate::args::{
    ClassicalArgs, Command, DetectArgs, DiscriminateArgs, OutputArgs, Pair, PurifyArgs, ScanArgs,
    StatisticsArg,
};
use crate::report::{Report, Row};

#[derive(Debug)]
pub enum Failure {
    Usage(String),
    Capacity(String),
    Internal(String),
}

impl From<statdisc::Error> for Failure {
    fn from(e: statdisc::Error) -> Self {
        match e {
            statdisc::Error::Capacity { .. } => Failure::Capacity(e.to_string()),
            statdisc::Error::InvalidArgument(_) => Failure::Usage(e.to_string()),
            other => Failure::Internal(other.to_string()),
        }
    }
}

type Outcome = Result<Report, Failure>;

pub fn run(command: &Command, output: &OutputArgs) -> Outcome {
    let seed = output.seed;
    match command {
        Command::Reproduce => reproduce(config(output, "reproduce", &json!({}))?),
        Command::Discriminate(a) => discriminate(a, config(output, "discriminate", a)?),
        Command::Scan(a) => scan(a, config(output, "scan", a)?),
        Command::Detect(a) => detect(a, config(output, "detect", a)?),
        Command::Purify(a) => purify(a, config(output, "purify", a)?),
        Command::Classical(a) => classical(a, seed, config(output, "classical", a)?),
    }
}

/// Output options and command arguments merged into one flat object.
fn config<T: Serialize>(output: &OutputArgs, command: &str, args: &T) -> Result<Value, Failure> {
    let internal = |e: serde_json::Error| Failure::Internal(e.to_string());
    let mut c = serde_json::to_value(output).map_err(internal)?;
    c["command"] = json!(command);
    if let Value::Object(extra) = serde_json::to_value(args).map_err(internal)? {
        for (k, v) in extra {
            c[k] = v;
        }
    }
    Ok(c)
}

fn statistics_list(s: Option<StatisticsArg>) -> Vec<Statistics> {
    match s {
        Some(s) => vec![s.into()],
        None => Statistics::ALL.to_vec(),
    }
}

fn aligned_vs_anti(prior0: f64) -> Result<(Hypothesis, Hypothesis), Failure> {
    Ok(hypothesis_pair(
        rho_aligned(2)?,
        sigma_antialigned(),
        prior0,
    )?)
}

fn aligned_vs_mixed(n: usize, prior0: f64) -> Result<(Hypothesis, Hypothesis), Failure> {
    Ok(hypothesis_pair(rho_aligned(n)?, tau_mixed(n)?, prior0)?)
}

fn reproduce(config: Value) -> Outcome {
    let mut report = Report::new("reproduce", config);

    let (s0, s1) = aligned_vs_anti(0.5)?;
    report.push(Row::against("P_H(rho2,sigma2)", helstrom(&s0, &s1)?, 0.75));
    for stats in Statistics::ALL {
        let r = beam_splitter_discrimination(&s0, &s1, stats)?;
        report.push(Row::against(
            format!("P_BS(rho2,sigma2,{stats})"),
            r.p_bs,
            0.75,
        ));
    }

    let (t0, t1) = aligned_vs_mixed(2, 0.5)?;
    report.push(Row::against("P_H(rho2,tau2)", helstrom(&t0, &t1)?, 0.625));
    for stats in Statistics::ALL {
        let r = beam_splitter_discrimination(&t0, &t1, stats)?;
        report.push(Row::against(
            format!("P_BS(rho2,tau2,{stats})"),
            r.p_bs,
            0.625,
        ));
    }

    for n in 1..=8 {
        let (h0, h1) = aligned_vs_mixed(n, 0.5)?;
        let reference = 1.0 - (n + 1) as f64 / 2f64.powi(n as i32 + 1);
        report.push(Row::against(
            format!("P_H(rhoN,tauN) N={n}"),
            helstrom(&h0, &h1)?,
            reference,
        ));
    }

    let (h0, h1) = aligned_vs_mixed(3, 0.5)?;
    let r = beam_splitter_discrimination(&h0, &h1, Statistics::Fermion)?;
    report.push(Row::against("P_BS(rho3,tau3,fermion)", r.p_bs, 0.75));

    for n in 2..=6 {
        let r = classical_pauli_report(n, ClassicalInterpretation::Standard)?;
        report.push(Row::against(
            format!("P_classical(standard) N={n}"),
            r.p_success,
            aligned_vs_mixed_closed_form(n),
        ));
    }

    let u = dft_unitary(2)?;
    let mut up_up = ComplexVector::zeros(4);
    up_up[0] = C64::new(1.0, 0.0);
    for stats in Statistics::ALL {
        let d = spatial_distribution(&evolve(&prepare_pure(&up_up, stats)?, &u)?.into())?;
        let (name, value) = match stats {
            Statistics::Boson => ("P_bunch(HOM,boson)", d.bunching()),
            Statistics::Fermion => ("P_antibunch(HOM,fermion)", d.antibunching()),
        };
        report.push(Row::against(name, value, 1.0));
    }

    let scheme = QuadratureScheme::default();
    let rho = quadrature_average(aligned_integrand(2), scheme)?;
    let sigma = quadrature_average(antialigned_integrand(), scheme)?;
    report.push(Row::against(
        "max|avg(n,n)-rho2|",
        max_abs_diff(rho.matrix(), rho_aligned(2)?.matrix()),
        0.0,
    ));
    report.push(Row::against(
        "max|avg(n,-n)-sigma2|",
        max_abs_diff(sigma.matrix(), sigma_antialigned().matrix()),
        0.0,
    ));

    let singlet =
        entanglement_detection_report(&TwoQubitPureState::singlet(), Statistics::Fermion)?;
    report.push(Row::against("P_detect(singlet)", singlet.p_bs, 0.625));

    let mixed = purify_symmetric(&DensityMatrix::maximally_mixed(vec![2])?)?;
    report.push(Row::against(
        "P_purify_success(r=0)",
        mixed.success_probability,
        0.75,
    ));

    Ok(report)
}

fn discriminate(a: &DiscriminateArgs, config: Value) -> Outcome {
    let (h0, h1, tag) = match a.pair {
        Pair::RhoSigma => {
            if a.n != 2 {
                return Err(Failure::Usage(format!(
                    "--pair rho-sigma is defined for two particles, got --n {}",
                    a.n
                )));
            }
            let (h0, h1) = aligned_vs_anti(a.prior0)?;
            (h0, h1, "rho2,sigma2".to_string())
        }
        Pair::RhoTau => {
            let (h0, h1) = aligned_vs_mixed(a.n, a.prior0)?;
            (h0, h1, format!("rho{0},tau{0}", a.n))
        }
    };
    let mut report = Report::new("discriminate", config);
    report.push(Row::new(format!("P_H({tag})"), helstrom(&h0, &h1)?));
    for stats in statistics_list(a.statistics) {
        let r = beam_splitter_discrimination(&h0, &h1, stats)?;
        report.push(Row::new(format!("P_BS({tag},{stats})"), r.p_bs));
        report.push(Row::new(format!("gap({tag},{stats})"), r.gap));
        let (d0, d1) = &r.distributions;
        report.push(Row::new(format!("P_bunch(H0,{stats})"), d0.bunching()));
        report.push(Row::new(format!("P_bunch(H1,{stats})"), d1.bunching()));
        report.push(Row::new(
            format!("P_antibunch(H0,{stats})"),
            d0.antibunching(),
        ));
        report.push(Row::new(
            format!("P_antibunch(H1,{stats})"),
            d1.antibunching(),
        ));
    }
    Ok(report)
}

fn scan(a: &ScanArgs, config: Value) -> Outcome {
    let stats = statistics_list(a.statistics);
    let mut records = Vec::new();
    for &s in &stats {
        records.push(conjecture_scan(a.n, s)?);
    }
    let mut report = Report::new("scan", config);
    for (i, n) in (1..=a.n).enumerate() {
        report.push(Row::new(
            format!("P_H(rhoN,tauN) N={n}"),
            records[0][i].p_helstrom,
        ));
        for (s, recs) in stats.iter().zip(&records) {
            report.push(Row::new(format!("P_BS N={n} {s}"), recs[i].p_bs_optimal));
            report.push(Row::new(format!("gap N={n} {s}"), recs[i].gap));
        }
    }
    Ok(report)
}

fn detect(a: &DetectArgs, config: Value) -> Outcome {
    let psi = TwoQubitPureState::from_schmidt(a.lambda)?;
    let r = entanglement_detection_report(&psi, a.statistics.into())?;
    let mut report = Report::new("detect", config);
    report.push(Row::new("P_detect", r.p_bs));
    report.push(Row::new("P_H", r.p_helstrom));
    report.push(Row::new("gap", r.gap));
    Ok(report)
}

fn purify(a: &PurifyArgs, config: Value) -> Outcome {
    if !(0.0..=1.0).contains(&a.r) {
        return Err(Failure::Usage(format!(
            "--r must lie in [0, 1], got {}",
            a.r
        )));
    }
    if !a.theta.is_finite() || !a.phi.is_finite() {
        return Err(Failure::Usage("angles must be finite".into()));
    }
    let bloch = [
        a.r * a.theta.sin() * a.phi.cos(),
        a.r * a.theta.sin() * a.phi.sin(),
        a.r * a.theta.cos(),
    ];
    let out = purify_symmetric(&DensityMatrix::from_bloch(bloch)?)?;
    let s = out.state.bloch_vector()?;
    let mut report = Report::new("purify", config);
    report.push(Row::new("r_in", a.r));
    report.push(Row::new(
        "r_out",
        s.iter().map(|x| x * x).sum::<f64>().sqrt(),
    ));
    report.push(Row::new("P_success", out.success_probability));
    report.push(Row::new("P_failure", out.failure_probability));
    for (axis, v) in ["x", "y", "z"].iter().zip(s) {
        report.push(Row::new(format!("bloch_out_{axis}"), v));
    }
    Ok(report)
}

fn classical(a: &ClassicalArgs, seed: u64, config: Value) -> Outcome {
    let interpretation: ClassicalInterpretation = a.classical_interpretation.into();
    let closed = aligned_vs_mixed_closed_form(a.n);
    let mut report = Report::new("classical", config);
    let name = format!("P_classical({}) N={}", interpretation.name(), a.n);
    let (value, map) = match a.samples {
        Some(samples) => (
            classical_pauli_monte_carlo(a.n, interpretation, samples, seed)?,
            None,
        ),
        None => {
            let r = classical_pauli_report(a.n, interpretation)?;
            (r.p_success, Some(r.p_map))
        }
    };
    // Only the exact standard reading is expected to coincide with the
    // quantum optimum.
    if interpretation == ClassicalInterpretation::Standard && a.samples.is_none() {
        report.push(Row::against(name, value, closed));
    } else {
        report.push(Row::new(name, value));
    }
    if let Some(map) = map {
        report.push(Row::new(
            format!("P_classical_MAP({}) N={}", interpretation.name(), a.n),
            map,
        ));
    }
    report.push(Row::new(format!("P_H(rhoN,tauN) N={}", a.n), closed));
    Ok(report)
}
