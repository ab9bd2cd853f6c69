//! Gibbs approximants, variational-principle checks and multifractal
//! quantities for the singular value potential.

use std::collections::BTreeMap;

use serde::Serialize;

use crate::certify::QMCertificate;
use crate::cocycle::Cocycle;
use crate::matalg::{self, Matrix};
use crate::pressure::{self, PressureBracket};
use crate::symbolic::Word;
use crate::{wordsum, Error, Result};

/// A probability vector on the cylinders of depth `n`, in lexicographic order.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CylinderMeasure {
    pub n: usize,
    pub weights: Vec<(Word, f64)>,
}

impl CylinderMeasure {
    pub fn total(&self) -> f64 {
        self.weights.iter().map(|(_, w)| w).sum()
    }

    pub fn get(&self, word: &Word) -> Option<f64> {
        self.weights
            .binary_search_by(|(w, _)| w.cmp(word))
            .ok()
            .map(|i| self.weights[i].1)
    }

    /// `sum_I |mu(I) - sum_a mu(aI)|` over `I` of depth `n - 1`.
    pub fn shift_invariance_defect(&self) -> f64 {
        if self.n < 2 {
            return 0.0;
        }
        let mut head: BTreeMap<&[usize], f64> = BTreeMap::new();
        let mut tail: BTreeMap<&[usize], f64> = BTreeMap::new();
        for (w, p) in &self.weights {
            let s = w.symbols();
            *head.entry(&s[..s.len() - 1]).or_default() += p;
            *tail.entry(&s[1..]).or_default() += p;
        }
        head.iter()
            .map(|(k, p)| (p - tail.get(k).copied().unwrap_or(0.0)).abs())
            .chain(tail.iter().filter(|(k, _)| !head.contains_key(*k)).map(|(_, p)| *p))
            .sum()
    }
}

fn normalise(n: usize, logs: Vec<(Word, f64)>) -> CylinderMeasure {
    let values: Vec<f64> = logs.iter().map(|(_, v)| *v).collect();
    let total = wordsum::log_sum_exp(&values);
    CylinderMeasure {
        n,
        weights: logs.into_iter().map(|(w, v)| (w, (v - total).exp())).collect(),
    }
}

fn log_phi_fn(s: f64) -> impl Fn(&Matrix) -> f64 + Sync {
    move |m: &Matrix| matalg::singular_values_unchecked(m).log_phi(s)
}

/// `nu_n(I) = phi~^s(I) / alpha_n^s`.
pub fn gibbs_nu(c: &Cocycle, s: f64, n: usize) -> Result<CylinderMeasure> {
    if n == 0 || !(s >= 0.0) {
        return Err(Error::InvalidArgument(format!("need n >= 1 and s >= 0 (got n = {n}, s = {s})")));
    }
    Ok(normalise(n, wordsum::collect(c, n, log_phi_fn(s))))
}

/// Depth-`m` marginal of the shift average of `nu_n`, over the `n - m + 1`
/// windows that see a full depth-`m` block.
pub fn gibbs_mu(c: &Cocycle, s: f64, n: usize, m: usize) -> Result<CylinderMeasure> {
    if m == 0 || m > n {
        return Err(Error::InvalidArgument(format!("marginal depth m = {m} must lie in 1..={n}")));
    }
    let nu = gibbs_nu(c, s, n)?;
    let windows = n - m + 1;
    let mut acc: BTreeMap<Word, f64> = c.subshift().enumerate_words(m).map(|w| (w, 0.0)).collect();
    for (w, p) in &nu.weights {
        for i in 0..windows {
            let key = Word::new(w.symbols()[i..i + m].to_vec());
            *acc.get_mut(&key).expect("subwords of admissible words are admissible") += p;
        }
    }
    let scale = 1.0 / windows as f64;
    Ok(CylinderMeasure {
        n: m,
        weights: acc.into_iter().map(|(w, p)| (w, p * scale)).collect(),
    })
}

#[derive(Debug, Clone, Serialize)]
pub struct GibbsRatios {
    pub min_ratio: f64,
    pub max_ratio: f64,
    /// `max(max_ratio, 1/min_ratio)`.
    pub constant: f64,
    /// Cylinders of `L(m)` carrying no mass.
    pub zero_weight: Vec<Word>,
}

/// Extremal `mu(I) / (exp(-m P) phi~^s(I))` over the support of `mu`.
pub fn gibbs_ratio_check(mu: &CylinderMeasure, c: &Cocycle, s: f64, p_mid: f64) -> Result<GibbsRatios> {
    let m = mu.n as f64;
    let mut min_ratio = f64::INFINITY;
    let mut max_ratio = 0.0f64;
    let mut zero_weight = Vec::new();
    for (w, p) in &mu.weights {
        if *p <= 0.0 {
            zero_weight.push(w.clone());
            continue;
        }
        let r = (p.ln() + m * p_mid - c.log_phi_word(w, s)?).exp();
        min_ratio = min_ratio.min(r);
        max_ratio = max_ratio.max(r);
    }
    Ok(GibbsRatios {
        min_ratio,
        max_ratio,
        constant: max_ratio.max(1.0 / min_ratio),
        zero_weight,
    })
}

/// `P_mid - (h_m + F_m)` with the block entropy `h_m = -(1/m) sum mu log mu`
/// and energy `F_m = (1/m) sum mu log phi~^s`.
pub fn variational_gap(c: &Cocycle, s: f64, mu: &CylinderMeasure, bracket: &PressureBracket) -> Result<f64> {
    let m = mu.n as f64;
    let mut h = 0.0;
    let mut f = 0.0;
    for (w, p) in &mu.weights {
        if *p > 0.0 {
            h -= p * p.ln();
            f += p * c.log_phi_word(w, s)?;
        }
    }
    Ok(bracket.midpoint() - (h + f) / m)
}

fn check_weights(c: &Cocycle, q_vec: &[f64], t_vec: &[usize]) -> Result<()> {
    if q_vec.is_empty() || q_vec.len() != t_vec.len() {
        return Err(Error::InvalidArgument("q and t must be nonempty and of equal length".into()));
    }
    if let Some(q) = q_vec.iter().find(|&&q| !(q > 0.0 && q.is_finite())) {
        return Err(Error::InvalidArgument(format!("weights must be positive, got {q}")));
    }
    let mut sorted = t_vec.to_vec();
    sorted.sort_unstable();
    sorted.dedup();
    if sorted.len() != t_vec.len() || sorted.iter().any(|&t| t == 0 || t > c.d()) {
        return Err(Error::InvalidArgument(format!(
            "exterior indices {t_vec:?} must be distinct and lie in 1..={}",
            c.d()
        )));
    }
    Ok(())
}

/// Bracket for `P(sum_i q_i Phi^{t_i})`.
///
/// When the combination is itself a singular value potential (`d = 1`) the
/// computation is delegated to [`pressure::pressure_bracket`].
pub fn weighted_pressure(
    c: &Cocycle,
    q_vec: &[f64],
    t_vec: &[usize],
    n: usize,
    cert: Option<&QMCertificate>,
) -> Result<PressureBracket> {
    check_weights(c, q_vec, t_vec)?;
    if c.d() == 1 {
        return pressure::pressure_bracket(c, q_vec[0], n, cert);
    }
    let exponent: f64 = q_vec.iter().zip(t_vec).map(|(q, &t)| q * t as f64).sum();
    let fekete_c = match cert {
        Some(cert) => {
            cert.check_compatible(c)?;
            let q_total: f64 = q_vec.iter().sum();
            let log_c1 = exponent * c.upsilon().ln() + (c.q() as f64).ln();
            let mut best = f64::INFINITY;
            for alt in cert.alternatives() {
                let base = t_vec
                    .iter()
                    .map(|&t| alt.constant_for(t as f64))
                    .collect::<Result<Vec<_>>>()?
                    .into_iter()
                    .fold(f64::INFINITY, f64::min);
                best = best.min(pressure::fekete_from_parts(log_c1, alt.k, base.powf(q_total)));
            }
            Some(best)
        }
        None => None,
    };
    let log_alpha = pressure::log_partition_sum(c, n, |m| {
        let sv = matalg::singular_values_unchecked(m);
        q_vec.iter().zip(t_vec).map(|(q, &t)| q * sv.log_phi(t as f64)).sum()
    })?;
    let upper = log_alpha / n as f64;
    Ok(PressureBracket {
        s: exponent,
        n,
        upper,
        lower: fekete_c.map(|cc| upper - cc / n as f64),
        fekete_c,
        log_alpha,
    })
}

#[derive(Debug, Clone, Serialize)]
pub struct MultifractalPoint {
    pub q_vec: Vec<f64>,
    pub t_vec: Vec<usize>,
    pub pressure: PressureBracket,
    /// Gradient of the bracket midpoint.
    pub alpha_vec: Vec<f64>,
    /// `P(q) - alpha . q`.
    pub level_entropy: f64,
    /// Coordinates whose one-sided differences disagree beyond
    /// [`ONE_SIDED_TOL`], hinting at non-differentiability.
    pub flagged: Vec<usize>,
}

pub const DEFAULT_FD_STEP: f64 = 1e-4;
pub const ONE_SIDED_TOL: f64 = 1e-3;

/// Gradient of `q -> P(q . Phi)` by Richardson-extrapolated central
/// differences, and the entropy of the corresponding level set.
pub fn multifractal_point(
    c: &Cocycle,
    q_vec: &[f64],
    t_vec: &[usize],
    n: usize,
    cert: Option<&QMCertificate>,
    fd_step: f64,
) -> Result<MultifractalPoint> {
    check_weights(c, q_vec, t_vec)?;
    if !(fd_step > 0.0) || q_vec.iter().any(|&q| q <= fd_step) {
        return Err(Error::InvalidArgument(format!(
            "every q must exceed the finite-difference step {fd_step}"
        )));
    }
    let mid = |q: &[f64]| weighted_pressure(c, q, t_vec, n, cert).map(|b| b.midpoint());
    let bracket = weighted_pressure(c, q_vec, t_vec, n, cert)?;
    let p0 = bracket.midpoint();
    let mut alpha_vec = Vec::with_capacity(q_vec.len());
    let mut flagged = Vec::new();
    for i in 0..q_vec.len() {
        let at = |h: f64| {
            let mut q = q_vec.to_vec();
            q[i] += h;
            mid(&q)
        };
        let (plus, minus) = (at(fd_step)?, at(-fd_step)?);
        let (plus_half, minus_half) = (at(0.5 * fd_step)?, at(-0.5 * fd_step)?);
        let d_full = (plus - minus) / (2.0 * fd_step);
        let d_half = (plus_half - minus_half) / fd_step;
        alpha_vec.push((4.0 * d_half - d_full) / 3.0);
        let forward = (plus - p0) / fd_step;
        let backward = (p0 - minus) / fd_step;
        if (forward - backward).abs() > ONE_SIDED_TOL {
            flagged.push(i);
        }
    }
    let level_entropy = p0 - alpha_vec.iter().zip(q_vec).map(|(a, q)| a * q).sum::<f64>();
    if level_entropy < -1e-9 {
        return Err(Error::Internal(format!(
            "negative level-set entropy {level_entropy:e}; the pressure estimate is not convex here"
        )));
    }
    Ok(MultifractalPoint {
        q_vec: q_vec.to_vec(),
        t_vec: t_vec.to_vec(),
        pressure: bracket,
        alpha_vec,
        level_entropy,
        flagged,
    })
}
