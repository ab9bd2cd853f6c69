//! Irreducibility, typicality (pinching and twisting on every exterior power)
//! and quasi-multiplicativity certificates.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::cocycle::Cocycle;
use crate::matalg::{self, EigenReport, Matrix};
use crate::symbolic::{HomoclinicSpec, Word};
use crate::{Error, Result};

/// Default twisting threshold after row normalisation.
pub const DEFAULT_ZERO_TOL: f64 = 1e-10;
/// Coefficients within this factor above `zero_tol` are reported as
/// inconclusive rather than coerced to pass.
pub const BORDERLINE_FACTOR: f64 = 1e3;
/// Connecting words are retained only up to this many pairs.
pub const RETAIN_PAIR_LIMIT: u64 = 100_000;

/// Outcome of an irreducibility test via Burnside's criterion.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct Irreducibility {
    /// The generated algebra is all of `M_d`, i.e. no common invariant
    /// subspace over the complex field.
    pub irreducible_over_c: bool,
    pub algebra_dim: usize,
}

/// Dimension of the algebra spanned by all generator products (identity
/// included), grown by incremental Gram-Schmidt on vectorised matrices.
pub fn irreducibility(c: &Cocycle) -> Irreducibility {
    let d = c.d();
    let full = d * d;
    let tol = 1e-10;
    let mut basis: Vec<Matrix> = Vec::new();
    let mut frontier: Vec<Matrix> = Vec::new();
    let try_add = |m: Matrix, basis: &mut Vec<Matrix>| -> Option<Matrix> {
        let scale = m.norm();
        if scale == 0.0 {
            return None;
        }
        let mut r = m / scale;
        for _ in 0..2 {
            for b in basis.iter() {
                let proj = r.dot(b);
                r -= b * proj;
            }
        }
        let n = r.norm();
        (n > tol).then(|| {
            let unit = r / n;
            basis.push(unit.clone());
            unit
        })
    };
    if let Some(b) = try_add(Matrix::identity(d, d), &mut basis) {
        frontier.push(b);
    }
    // words of length <= d^2 suffice: the span stabilises once a level adds nothing
    for _ in 0..full {
        if basis.len() == full || frontier.is_empty() {
            break;
        }
        let mut next = Vec::new();
        for m in &frontier {
            for g in c.generators() {
                if let Some(b) = try_add(g * m, &mut basis) {
                    next.push(b);
                }
            }
        }
        frontier = next;
    }
    Irreducibility {
        irreducible_over_c: basis.len() == full,
        algebra_dim: basis.len(),
    }
}

/// Three-valued verdict for numerical conditions with a borderline band.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Verdict {
    Pass,
    Fail,
    Inconclusive,
}

impl Verdict {
    pub fn passed(self) -> bool {
        self == Verdict::Pass
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct PinchingVerdict {
    pub t: usize,
    pub verdict: Verdict,
    /// Smallest relative gap between consecutive moduli of the `t`-fold
    /// eigenvalue products.
    pub modulus_gap: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct PinchingReport {
    pub p_word: Word,
    pub eigen: EigenReport,
    pub per_t: Vec<PinchingVerdict>,
}

impl PinchingReport {
    pub fn all_pass(&self) -> bool {
        self.per_t.iter().all(|v| v.verdict.passed())
    }
}

fn relative_gaps(mut moduli: Vec<f64>) -> f64 {
    moduli.sort_by(|a, b| b.total_cmp(a));
    if moduli.len() < 2 {
        return 1.0;
    }
    moduli
        .windows(2)
        .map(|w| if w[0] > 0.0 { (w[0] - w[1]) / w[0] } else { 0.0 })
        .fold(f64::INFINITY, f64::min)
}

/// Pinching at the periodic point `p_word^infinity` for `t = 1..d-1`.
pub fn pinching_check(c: &Cocycle, p_word: &Word, gap_tol: f64) -> Result<PinchingReport> {
    c.subshift().check_cyclic(p_word)?;
    let p = c.evaluate_word(p_word)?;
    let eigen = matalg::eigen_report(&p, gap_tol)?;
    let d = c.d();
    let moduli = eigen.moduli();
    let mut per_t = Vec::new();
    for t in 1..d {
        let (verdict, gap) = if t == 1 {
            let v = if eigen.simple_real_distinct_moduli { Verdict::Pass } else { Verdict::Fail };
            (v, eigen.modulus_gap)
        } else {
            let products: Vec<f64> = matalg::combinations(d, t)
                .iter()
                .map(|idx| idx.iter().map(|&i| moduli[i]).product())
                .collect();
            let gap = relative_gaps(products);
            let real = eigen.eigenvalues.iter().all(|&(_, im)| im == 0.0);
            let v = if real && gap > gap_tol { Verdict::Pass } else { Verdict::Fail };
            (v, gap)
        };
        per_t.push(PinchingVerdict { t, verdict, modulus_gap: gap });
    }
    Ok(PinchingReport {
        p_word: p_word.clone(),
        eigen,
        per_t,
    })
}

#[derive(Debug, Clone, Serialize)]
pub struct TwistingVerdict {
    pub t: usize,
    pub verdict: Verdict,
    /// Smallest `|c_{I,J}|` after scaling each row to unit max.
    pub min_coefficient: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct TwistingReport {
    pub homoclinic: HomoclinicSpec,
    /// `psi_p^z`, row-major.
    pub holonomy_loop: Vec<Vec<f64>>,
    pub per_t: Vec<TwistingVerdict>,
}

impl TwistingReport {
    pub fn all_pass(&self) -> bool {
        self.per_t.iter().all(|v| v.verdict.passed())
    }
}

fn rows_of(m: &Matrix) -> Vec<Vec<f64>> {
    (0..m.nrows()).map(|i| m.row(i).iter().copied().collect()).collect()
}

/// Coefficients of `psi(v_i)` in the eigenbasis: entry `(j, i)` is
/// `<w_j, psi v_i> / <w_j, v_j>`.
fn eigenbasis_coefficients(eigen: &EigenReport, psi: &Matrix) -> Result<Matrix> {
    let v = eigen
        .right_matrix()
        .ok_or_else(|| Error::InvalidArgument("pinching failed; eigenbasis undefined".into()))?;
    let w = eigen.left_matrix().expect("left vectors accompany right vectors");
    let mut coeff = w.transpose() * psi * &v;
    for j in 0..coeff.nrows() {
        let pairing = w.column(j).dot(&v.column(j));
        coeff.row_mut(j).unscale_mut(pairing);
    }
    Ok(coeff)
}

fn min_normalized_entry(m: &Matrix) -> f64 {
    // row i of the transpose lists the coefficients of psi(v_I)
    let t = m.transpose();
    (0..t.nrows())
        .map(|i| {
            let row = t.row(i);
            let scale = row.amax();
            if scale == 0.0 {
                0.0
            } else {
                row.iter().map(|x| x.abs() / scale).fold(f64::INFINITY, f64::min)
            }
        })
        .fold(f64::INFINITY, f64::min)
}

/// Twisting of the eigenbasis of `P^{wedge t}` by `psi^{wedge t}`, `t = 1..d-1`.
pub fn twisting_check(
    c: &Cocycle,
    p_word: &Word,
    h: &HomoclinicSpec,
    gap_tol: f64,
    zero_tol: f64,
) -> Result<TwistingReport> {
    if &h.p_word != p_word {
        return Err(Error::InvalidArgument(format!(
            "homoclinic spec is built on {} but the periodic word is {p_word}",
            h.p_word
        )));
    }
    let pinching = pinching_check(c, p_word, gap_tol)?;
    if !pinching.all_pass() {
        return Err(Error::InvalidArgument(format!(
            "pinching fails at {p_word}; twisting needs well-separated eigenbases"
        )));
    }
    let psi = c.holonomy_loop(h)?;
    let coeff = eigenbasis_coefficients(&pinching.eigen, &psi)?;
    let per_t = (1..c.d())
        .map(|t| {
            let ct = matalg::exterior_power(&coeff, t)?;
            let min_coefficient = min_normalized_entry(&ct);
            let verdict = if min_coefficient <= zero_tol {
                Verdict::Fail
            } else if min_coefficient <= zero_tol * BORDERLINE_FACTOR {
                Verdict::Inconclusive
            } else {
                Verdict::Pass
            };
            Ok(TwistingVerdict { t, verdict, min_coefficient })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(TwistingReport {
        homoclinic: h.clone(),
        holonomy_loop: rows_of(&psi),
        per_t,
    })
}

#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct Tolerances {
    pub gap_tol: f64,
    pub zero_tol: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Tolerances {
            gap_tol: matalg::DEFAULT_GAP_TOL,
            zero_tol: DEFAULT_ZERO_TOL,
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct TypicalityReport {
    pub pinching: PinchingReport,
    /// Absent when pinching fails (the eigenbasis is then undefined).
    pub twisting: Option<TwistingReport>,
    pub tolerances: Tolerances,
    pub typical: bool,
    /// Verdicts of the adjoint cocycle at the reversed orbit agree.
    pub adjoint_agrees: bool,
}

fn verdict_signature(c: &Cocycle, p: &Word, h: &HomoclinicSpec, tol: Tolerances) -> Result<(PinchingReport, Option<TwistingReport>)> {
    let pinching = pinching_check(c, p, tol.gap_tol)?;
    let twisting = if pinching.all_pass() {
        Some(twisting_check(c, p, h, tol.gap_tol, tol.zero_tol)?)
    } else {
        None
    };
    Ok((pinching, twisting))
}

fn verdicts(p: &PinchingReport, t: &Option<TwistingReport>) -> Vec<Verdict> {
    let mut v: Vec<Verdict> = p.per_t.iter().map(|x| x.verdict).collect();
    if let Some(t) = t {
        v.extend(t.per_t.iter().map(|x| x.verdict));
    }
    v
}

/// Pinching and twisting for `t = 1..d-1`, cross-checked on the adjoint.
pub fn typicality_report(c: &Cocycle, p_word: &Word, h: &HomoclinicSpec, tol: Tolerances) -> Result<TypicalityReport> {
    let (pinching, twisting) = verdict_signature(c, p_word, h, tol)?;
    let rev = h.reversed();
    let (adj_p, adj_t) = verdict_signature(&c.adjoint_cocycle(), &rev.p_word, &rev, tol)?;
    let adjoint_agrees = verdicts(&pinching, &twisting) == verdicts(&adj_p, &adj_t);
    let typical = pinching.all_pass() && twisting.as_ref().is_some_and(TwistingReport::all_pass);
    Ok(TypicalityReport {
        pinching,
        twisting,
        tolerances: tol,
        typical,
        adjoint_agrees,
    })
}

/// A retained connecting word for the pair `(i, j)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Connection {
    pub i: Word,
    pub j: Word,
    pub k: Word,
    /// `min_t phi~^t(IKJ) / (phi~^t(I) phi~^t(J))`.
    pub ratio: f64,
}

/// Finite-horizon quasi-multiplicativity certificate.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct QMCertificate {
    /// Longest connecting word used.
    pub k: usize,
    /// Uniform constant over every checked pair and covered index.
    pub c: f64,
    pub horizon_l: usize,
    pub k_max: usize,
    /// Covered exterior indices.
    pub t_set: Vec<usize>,
    /// Per-index constants for the chosen connecting words, aligned with `t_set`.
    pub c_per_t: Vec<f64>,
    /// Real interval of `s` covered after interpolation.
    pub s_range: Option<(f64, f64)>,
    pub derivation: Option<String>,
    pub exhaustive: bool,
    pub pair_count: u64,
    pub connecting_words: Option<Vec<Connection>>,
    /// Worst pair and its connecting word.
    pub argmin: Option<Connection>,
    /// First pair admitting no connecting word within `k_max`.
    pub failure: Option<(Word, Word)>,
    pub alphabet: usize,
    pub dim: usize,
    /// Hash of the adjacency matrix and generators the search ran on.
    pub fingerprint: String,
    /// Weaker certificates obtained by restricting connecting words to
    /// `|K| <= k`, for each `k` at which every pair is still connected.
    #[serde(default)]
    pub tiers: Vec<Tier>,
}

/// The certificate restricted to connecting words of length at most `k`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Tier {
    pub k: usize,
    pub c: f64,
    pub c_per_t: Vec<f64>,
}

/// FNV-1a over the adjacency and generator bit patterns.
pub fn fingerprint(c: &Cocycle) -> String {
    let mut h: u64 = 0xcbf29ce484222325;
    let mut eat = |bytes: &[u8]| {
        for &b in bytes {
            h ^= u64::from(b);
            h = h.wrapping_mul(0x100000001b3);
        }
    };
    for row in c.subshift().adjacency_rows() {
        eat(&row);
    }
    for g in c.generators() {
        for x in g.iter() {
            eat(&x.to_bits().to_le_bytes());
        }
    }
    format!("{h:016x}")
}

impl QMCertificate {
    pub fn check_compatible(&self, c: &Cocycle) -> Result<()> {
        if self.alphabet != c.q() || self.dim != c.d() || self.fingerprint != fingerprint(c) {
            return Err(Error::Certificate(format!(
                "certificate was issued for a different cocycle (fingerprint {}, expected {})",
                self.fingerprint,
                fingerprint(c)
            )));
        }
        if !(self.c > 0.0) {
            return Err(Error::Certificate(match &self.failure {
                Some((i, j)) => format!("certificate has c = 0: pair ({i}, {j}) has no connecting word"),
                None => "certificate has c = 0".into(),
            }));
        }
        Ok(())
    }

    fn c_at(&self, t: usize) -> Option<f64> {
        self.t_set.iter().position(|&x| x == t).map(|i| self.c_per_t[i])
    }

    /// Every `(k, c)` alternative: the certificate itself and its tiers.
    pub fn alternatives(&self) -> Vec<QMCertificate> {
        let mut out = vec![self.clone()];
        for tier in &self.tiers {
            let mut alt = self.clone();
            alt.k = tier.k;
            alt.c = tier.c;
            alt.c_per_t = tier.c_per_t.clone();
            alt.tiers = Vec::new();
            alt.connecting_words = None;
            out.push(alt);
        }
        out
    }

    /// The quasi-multiplicativity constant valid for `phi~^s`.
    ///
    /// Inside the interpolated range the uniform `c` applies; at a covered
    /// integer index its own constant applies; beyond `d` the potential is
    /// `|det|^{s/d}`, so the `t = d` constant raised to `s/d` applies.
    pub fn constant_for(&self, s: f64) -> Result<f64> {
        if s == 0.0 {
            return Ok(self.c.min(1.0));
        }
        if let Some((lo, hi)) = self.s_range {
            if s >= lo && s <= hi {
                return Ok(self.c);
            }
        }
        if s.fract() == 0.0 && s <= self.dim as f64 {
            if let Some(ct) = self.c_at(s as usize) {
                return Ok(ct);
            }
        }
        if s > self.dim as f64 {
            if let Some(cd) = self.c_at(self.dim) {
                return Ok(cd.powf(s / self.dim as f64));
            }
        }
        Err(Error::Certificate(format!(
            "certificate (t = {:?}, s-range {:?}) does not cover s = {s}",
            self.t_set, self.s_range
        )))
    }
}

#[derive(Clone)]
struct PairBest {
    k: Word,
    ratio: f64,
    per_t: Vec<f64>,
}

struct RowSummary {
    /// Per length bound: smallest best ratio, per-index minima, longest `K`.
    tiers: Vec<Option<(f64, Vec<f64>, usize)>>,
    min: Option<(f64, usize, PairBest)>,
    per_t_min: Vec<f64>,
    k_used: usize,
    retained: Vec<Connection>,
    failure: Option<usize>,
}

/// Exhaustive search for simultaneous connecting words.
///
/// For each admissible pair `(I, J)` with `|I|, |J| <= horizon` the connecting
/// word `K`, `|K| <= k_max`, maximising `min_t phi~^t(IKJ)/(phi~^t(I) phi~^t(J))`
/// is chosen (shortest first, then lexicographic). One `K` serves every `t`.
pub fn qm_search(c: &Cocycle, t_set: &[usize], horizon: usize, k_max: usize) -> Result<QMCertificate> {
    let d = c.d();
    if t_set.is_empty() || t_set.iter().any(|&t| t > d) {
        return Err(Error::InvalidArgument(format!("exterior indices {t_set:?} must lie in 0..={d}")));
    }
    if horizon == 0 {
        return Err(Error::InvalidArgument("horizon must be at least 1".into()));
    }
    let mut t_set = t_set.to_vec();
    t_set.sort_unstable();
    t_set.dedup();
    let shift = c.subshift();
    let words = shift.words_up_to(horizon);
    let logs = |m: &Matrix| -> Vec<f64> {
        let sv = matalg::singular_values_unchecked(m);
        t_set.iter().map(|&t| sv.log_phi(t as f64)).collect()
    };
    let word_data: Vec<(Matrix, Vec<f64>)> = words
        .iter()
        .map(|w| {
            let m = c.product(w.symbols());
            let l = logs(&m);
            (m, l)
        })
        .collect();
    let mut candidates = vec![Word::empty()];
    candidates.extend(shift.words_up_to(k_max));
    let pair_count = (words.len() as u64).pow(2);
    let retain = pair_count <= RETAIN_PAIR_LIMIT;

    let best_for = |ii: usize, jj: usize| -> Vec<Option<PairBest>> {
        let (wi, wj) = (&words[ii], &words[jj]);
        let (last, first) = (wi.last().expect("nonempty"), wj.first().expect("nonempty"));
        let (mi, li) = &word_data[ii];
        let lj = &word_data[jj].1;
        let mut best: Option<PairBest> = None;
        let mut by_len: Vec<Option<PairBest>> = Vec::with_capacity(k_max + 1);
        for k in &candidates {
            while by_len.len() < k.len() {
                by_len.push(best.clone());
            }
            let joins = match (k.first(), k.last()) {
                (Some(kf), Some(kl)) => shift.allowed(last, kf) && shift.allowed(kl, first),
                _ => shift.allowed(last, first),
            };
            if !joins {
                continue;
            }
            let mut m = mi.clone();
            for &a in k.symbols().iter().chain(wj.symbols()) {
                m = c.generator(a) * m;
            }
            let lm = logs(&m);
            let per_t: Vec<f64> = (0..t_set.len()).map(|x| (lm[x] - li[x] - lj[x]).exp()).collect();
            let ratio = per_t.iter().copied().fold(f64::INFINITY, f64::min);
            if best.as_ref().is_none_or(|b| ratio > b.ratio) {
                best = Some(PairBest { k: k.clone(), ratio, per_t });
            }
        }
        while by_len.len() <= k_max {
            by_len.push(best.clone());
        }
        by_len
    };

    let rows: Vec<RowSummary> = (0..words.len())
        .into_par_iter()
        .map(|ii| {
            let mut row = RowSummary {
                tiers: vec![Some((f64::INFINITY, vec![f64::INFINITY; t_set.len()], 0)); k_max + 1],
                min: None,
                per_t_min: vec![f64::INFINITY; t_set.len()],
                k_used: 0,
                retained: Vec::new(),
                failure: None,
            };
            for jj in 0..words.len() {
                let mut by_len = best_for(ii, jj);
                for (tier, b) in row.tiers.iter_mut().zip(&by_len) {
                    match (tier.as_mut(), b) {
                        (Some((r, per_t, k)), Some(b)) => {
                            *r = r.min(b.ratio);
                            for (m, &x) in per_t.iter_mut().zip(&b.per_t) {
                                *m = m.min(x);
                            }
                            *k = (*k).max(b.k.len());
                        }
                        _ => *tier = None,
                    }
                }
                let Some(best) = by_len.pop().flatten() else {
                    row.failure.get_or_insert(jj);
                    continue;
                };
                row.k_used = row.k_used.max(best.k.len());
                for (m, &r) in row.per_t_min.iter_mut().zip(&best.per_t) {
                    *m = m.min(r);
                }
                if retain {
                    row.retained.push(Connection {
                        i: words[ii].clone(),
                        j: words[jj].clone(),
                        k: best.k.clone(),
                        ratio: best.ratio,
                    });
                }
                if row.min.as_ref().is_none_or(|(r, _, _)| best.ratio < *r) {
                    row.min = Some((best.ratio, jj, best));
                }
            }
            row
        })
        .collect();

    let mut c_min = f64::INFINITY;
    let mut argmin = None;
    let mut per_t_min = vec![f64::INFINITY; t_set.len()];
    let mut k_used = 0;
    let mut failure = None;
    let mut retained = retain.then(Vec::new);
    let mut tier_acc: Vec<Option<(f64, Vec<f64>, usize)>> =
        vec![Some((f64::INFINITY, vec![f64::INFINITY; t_set.len()], 0)); k_max + 1];
    for (ii, row) in rows.into_iter().enumerate() {
        for (acc, t) in tier_acc.iter_mut().zip(&row.tiers) {
            match (acc.as_mut(), t) {
                (Some((r, per_t, k)), Some((tr, tp, tk))) => {
                    *r = r.min(*tr);
                    for (m, &x) in per_t.iter_mut().zip(tp) {
                        *m = m.min(x);
                    }
                    *k = (*k).max(*tk);
                }
                _ => *acc = None,
            }
        }
        if failure.is_none() {
            if let Some(jj) = row.failure {
                failure = Some((words[ii].clone(), words[jj].clone()));
            }
        }
        k_used = k_used.max(row.k_used);
        for (m, r) in per_t_min.iter_mut().zip(row.per_t_min) {
            *m = m.min(r);
        }
        if let Some((r, jj, best)) = row.min {
            if r < c_min {
                c_min = r;
                argmin = Some(Connection {
                    i: words[ii].clone(),
                    j: words[jj].clone(),
                    k: best.k,
                    ratio: r,
                });
            }
        }
        if let Some(v) = retained.as_mut() {
            v.extend(row.retained);
        }
    }
    if failure.is_some() {
        c_min = 0.0;
    }
    // the last bound is the certificate itself
    tier_acc.pop();
    let mut tiers: Vec<Tier> = Vec::new();
    for (c, c_per_t, k) in tier_acc.into_iter().flatten() {
        if c > 0.0 && c.is_finite() && tiers.last().is_none_or(|t| t.k != k) && k < k_used {
            tiers.push(Tier { k, c, c_per_t });
        }
    }
    Ok(QMCertificate {
        k: k_used,
        c: c_min,
        horizon_l: horizon,
        k_max,
        t_set,
        c_per_t: per_t_min,
        s_range: None,
        derivation: None,
        exhaustive: true,
        pair_count,
        connecting_words: retained,
        argmin,
        failure,
        alphabet: c.q(),
        dim: d,
        fingerprint: fingerprint(c),
        tiers,
    })
}

/// Extends an integer-index certificate covering `0..=d` to every real
/// `s in [0, d]`.
///
/// For one-step cocycles `phi^s = (phi^n)^g (phi^{n+1})^{1-g}` holds exactly
/// with `s = n g + (n + 1)(1 - g)`, so the same connecting word gives ratio
/// at least `c^g c^{1-g} = c`.
pub fn extend_certificate_to_s(cert: &QMCertificate) -> Result<QMCertificate> {
    let missing: Vec<usize> = (0..=cert.dim).filter(|t| !cert.t_set.contains(t)).collect();
    if !missing.is_empty() {
        return Err(Error::Certificate(format!(
            "extension to real s needs every integer index 0..={}; missing {missing:?}",
            cert.dim
        )));
    }
    let mut out = cert.clone();
    out.s_range = Some((0.0, cert.dim as f64));
    out.derivation = Some(format!(
        "phi^s = (phi^n)^g (phi^(n+1))^(1-g) exactly for one-step cocycles; \
         ratio >= c^g c^(1-g) = c = {:e} on [0, {}]",
        cert.c, cert.dim
    ));
    Ok(out)
}

/// Re-evaluates retained triples; returns the smallest ratio seen at `s`.
pub fn reevaluate(c: &Cocycle, cert: &QMCertificate, s: f64) -> Result<f64> {
    let conns = cert
        .connecting_words
        .as_ref()
        .ok_or_else(|| Error::Certificate("certificate did not retain connecting words".into()))?;
    let mut worst = f64::INFINITY;
    for conn in conns {
        let whole = conn.i.concat(&conn.k).concat(&conn.j);
        let r = (c.log_phi_word(&whole, s)? - c.log_phi_word(&conn.i, s)? - c.log_phi_word(&conn.j, s)?).exp();
        worst = worst.min(r);
    }
    Ok(worst)
}
