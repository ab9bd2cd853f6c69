//! Subadditive pressure brackets for the singular value potential, pressure
//! curves and Bowen-equation roots.

use serde::Serialize;

use crate::certify::{self, QMCertificate};
use crate::cocycle::Cocycle;
use crate::matalg::{self, Matrix};
use crate::wordsum;
use crate::{Error, Result};

/// Depth schedule for the root search.
pub const DEPTH_SCHEDULE: [usize; 5] = [4, 6, 8, 10, 12];
pub const DEFAULT_TOL_S: f64 = 1e-6;

/// Bounds on `P(Phi^s)` from words of length `n`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PressureBracket {
    pub s: f64,
    pub n: usize,
    /// `(1/n) log alpha_n^s`, an upper bound at every `n`.
    pub upper: f64,
    /// `upper - C/n`; absent without a quasi-multiplicativity certificate.
    pub lower: Option<f64>,
    pub fekete_c: Option<f64>,
    pub log_alpha: f64,
}

impl PressureBracket {
    pub fn is_one_sided(&self) -> bool {
        self.lower.is_none()
    }

    pub fn width(&self) -> Option<f64> {
        self.lower.map(|l| self.upper - l)
    }

    /// Centre of the bracket, or the upper bound when one-sided.
    pub fn midpoint(&self) -> f64 {
        match self.lower {
            Some(l) => 0.5 * (l + self.upper),
            None => self.upper,
        }
    }

    pub fn contains(&self, p: f64) -> bool {
        p <= self.upper && self.lower.is_none_or(|l| l <= p)
    }
}

fn check_depth(n: usize) -> Result<()> {
    if n == 0 {
        return Err(Error::InvalidArgument("depth n must be at least 1".into()));
    }
    Ok(())
}

fn check_s(s: f64) -> Result<()> {
    if !(s.is_finite() && s >= 0.0) {
        return Err(Error::InvalidArgument(format!("s = {s} must be finite and >= 0")));
    }
    Ok(())
}

/// `log sum_{I in L(n)} exp(f(A(I)))`.
pub(crate) fn log_partition_sum<F>(c: &Cocycle, n: usize, f: F) -> Result<f64>
where
    F: Fn(&Matrix) -> f64 + Sync,
{
    check_depth(n)?;
    let v = wordsum::log_sum(c, n, f);
    if !v.is_finite() {
        return Err(Error::Internal(format!("partition sum at depth {n} is {v}")));
    }
    Ok(v)
}

/// `log alpha_n^s = log sum_{I in L(n)} phi~^s(I)`.
pub fn log_alpha_n(c: &Cocycle, s: f64, n: usize) -> Result<f64> {
    check_s(s)?;
    log_partition_sum(c, n, |m| matalg::singular_values_unchecked(m).log_phi(s))
}

/// `(1/n) log alpha_n^s`, which bounds `P(Phi^s)` from above.
pub fn pressure_upper(c: &Cocycle, s: f64, n: usize) -> Result<f64> {
    Ok(log_alpha_n(c, s, n)? / n as f64)
}

/// `C = log(c^{-1} sum_{i=0}^k C_1^i)` given `log C_1`.
pub(crate) fn fekete_from_parts(log_c1: f64, k: usize, qm_c: f64) -> f64 {
    let terms: Vec<f64> = (0..=k).map(|i| i as f64 * log_c1).collect();
    wordsum::log_sum_exp(&terms) - qm_c.ln()
}

/// Almost-superadditivity constant `C` for `Phi^s` with `C_1 = Upsilon^s q`.
pub fn fekete_constant(c: &Cocycle, s: f64, cert: &QMCertificate) -> Result<f64> {
    check_s(s)?;
    cert.check_compatible(c)?;
    let log_c1 = s * c.upsilon().ln() + (c.q() as f64).ln();
    let mut best = f64::INFINITY;
    for alt in cert.alternatives() {
        best = best.min(fekete_from_parts(log_c1, alt.k, alt.constant_for(s)?));
    }
    Ok(best)
}

/// `(1/n) log alpha_n^s - C/n`, which bounds `P(Phi^s)` from below under the
/// certificate.
pub fn pressure_lower(c: &Cocycle, s: f64, n: usize, cert: &QMCertificate) -> Result<f64> {
    Ok(pressure_bracket(c, s, n, Some(cert))?.lower.expect("certificate supplied"))
}

/// Both bounds from a single word sum. Without a certificate the bracket is
/// one-sided.
pub fn pressure_bracket(c: &Cocycle, s: f64, n: usize, cert: Option<&QMCertificate>) -> Result<PressureBracket> {
    let fekete_c = cert.map(|cert| fekete_constant(c, s, cert)).transpose()?;
    let log_alpha = log_alpha_n(c, s, n)?;
    let upper = log_alpha / n as f64;
    Ok(PressureBracket {
        s,
        n,
        upper,
        lower: fekete_c.map(|cc| upper - cc / n as f64),
        fekete_c,
        log_alpha,
    })
}

/// Brackets at every grid point.
pub fn pressure_curve(c: &Cocycle, cert: Option<&QMCertificate>, s_grid: &[f64], n: usize) -> Result<Vec<PressureBracket>> {
    s_grid.iter().map(|&s| pressure_bracket(c, s, n, cert)).collect()
}

/// Outcome of the Bowen-equation root search.
#[derive(Debug, Clone, Serialize)]
pub struct BowenRoot {
    pub s_star: f64,
    /// Final enclosure of the root.
    pub interval: (f64, f64),
    pub bracket_at_root: PressureBracket,
    /// Deepest word length used.
    pub n_used: usize,
    /// The enclosure reached `tol_s`.
    pub conclusive: bool,
    /// Zero topological entropy: `P(Phi^0) = 0`, so the root is `s = 0`.
    pub degenerate: bool,
    /// Some generator has norm at least 1.
    pub non_contracting: bool,
}

/// Decay rates of `s -> P(Phi^s)` for contracting cocycles: for `delta >= 0`,
/// `delta log varrho <= P(s + delta) - P(s) <= delta log Upsilon`, and the
/// same holds for both bracket ends at every depth.
#[derive(Debug, Clone, Copy)]
struct Slopes {
    fastest: f64,
    slowest: f64,
}

/// Refines `[lo, hi]` with a bracket `[l, u]` of `P(mid)`. Returns whether the
/// sign of `P(mid)` was decided.
fn refine(lo: &mut f64, hi: &mut f64, mid: f64, b: &PressureBracket, slopes: Option<Slopes>) -> bool {
    let (l, u) = (b.lower.expect("root search uses certified brackets"), b.upper);
    if let Some(k) = slopes {
        if l > 0.0 {
            *lo = lo.max(mid + l / k.fastest);
        } else {
            *lo = lo.max(mid + l / k.slowest);
        }
        if u < 0.0 {
            *hi = hi.min(mid + u / k.fastest);
        } else {
            *hi = hi.min(mid + u / k.slowest);
        }
    }
    if l > 0.0 {
        *lo = lo.max(mid);
        true
    } else if u < 0.0 {
        *hi = hi.min(mid);
        true
    } else {
        false
    }
}

/// Root of `s -> P(Phi^s)` by bisection on certified brackets, escalating the
/// depth through [`DEPTH_SCHEDULE`] (capped at `n_max`) until each step's
/// bracket excludes zero. The search is confined to `[0, 2d]`.
pub fn bowen_root(c: &Cocycle, cert: &QMCertificate, tol_s: f64, n_max: usize) -> Result<BowenRoot> {
    if !(tol_s > 0.0) {
        return Err(Error::InvalidArgument(format!("tol_s = {tol_s} must be positive")));
    }
    let depths: Vec<usize> = DEPTH_SCHEDULE.iter().copied().filter(|&n| n <= n_max).collect();
    let depths = if depths.is_empty() { vec![n_max] } else { depths };
    check_depth(depths[0])?;
    cert.check_compatible(c)?;
    let upsilon = c.upsilon();
    let non_contracting = upsilon >= 1.0;
    let slopes = (!non_contracting).then(|| Slopes {
        slowest: -upsilon.ln(),
        fastest: -c.varrho().ln(),
    });
    let cap = 2.0 * c.d() as f64;
    let deepest = *depths.last().expect("nonempty");

    let at_zero = pressure_bracket(c, 0.0, depths[0], Some(cert))?;
    if at_zero.upper <= 0.0 {
        return Ok(BowenRoot {
            s_star: 0.0,
            interval: (0.0, 0.0),
            bracket_at_root: at_zero,
            n_used: depths[0],
            conclusive: true,
            degenerate: true,
            non_contracting,
        });
    }
    let at_cap = pressure_bracket(c, cap, deepest, Some(cert))?;
    if at_cap.upper >= 0.0 {
        return Err(Error::RootSearch(format!(
            "pressure is not negative at the search cap s = {cap} (upper bound {:e} at n = {deepest})",
            at_cap.upper
        )));
    }

    let (mut lo, mut hi) = (0.0f64, cap);
    let mut n_used = depths[0];
    let mut conclusive = true;
    while hi - lo > tol_s {
        let mid = 0.5 * (lo + hi);
        let width = hi - lo;
        let mut decided = false;
        for &n in &depths {
            let b = pressure_bracket(c, mid, n, Some(cert))?;
            n_used = n_used.max(n);
            decided = refine(&mut lo, &mut hi, mid, &b, slopes);
            if decided || hi - lo <= tol_s {
                break;
            }
        }
        if lo > hi {
            // rounding in the enclosure at an exact root
            let m = 0.5 * (lo + hi);
            (lo, hi) = (m, m);
        }
        // an undecided step still helps if the slope enclosure shrank the interval
        if !decided && hi - lo > tol_s.max(0.9 * width) {
            conclusive = false;
            break;
        }
    }
    let s_star = 0.5 * (lo + hi);
    let bracket_at_root = pressure_bracket(c, s_star, n_used, Some(cert))?;
    Ok(BowenRoot {
        s_star,
        interval: (lo, hi),
        bracket_at_root,
        n_used,
        conclusive,
        degenerate: false,
        non_contracting,
    })
}

/// Certificate used for dimension computations: every integer index
/// `0..=d`, horizon 4, connecting words up to length 2, extended to real `s`.
pub fn dimension_certificate(c: &Cocycle) -> Result<QMCertificate> {
    let t_set: Vec<usize> = (0..=c.d()).collect();
    certify::extend_certificate_to_s(&certify::qm_search(c, &t_set, 4, 2)?)
}

/// Affinity dimension of the self-affine set generated by the contractions
/// `x -> A_i x + v_i`: the Bowen root over the full shift.
pub fn affinity_dimension(matrices: &[Matrix]) -> Result<BowenRoot> {
    let c = Cocycle::full_shift(matrices.to_vec())?;
    if !c.is_contracting() {
        return Err(Error::InvalidArgument(format!(
            "affinity dimension needs contractions; max norm is {}",
            c.upsilon()
        )));
    }
    let cert = dimension_certificate(&c)?;
    bowen_root(&c, &cert, DEFAULT_TOL_S, 12)
}
