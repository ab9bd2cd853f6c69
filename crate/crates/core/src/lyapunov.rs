//! Lyapunov exponents along itineraries and periodic orbits, inner
//! approximations of the Lyapunov spectrum, and concatenation witnesses for
//! its convexity.

use std::collections::BTreeSet;

use rayon::prelude::*;
use serde::Serialize;

use crate::certify::QMCertificate;
use crate::cocycle::Cocycle;
use crate::geometry;
use crate::matalg::{self, Matrix};
use crate::symbolic::Word;
use crate::{Error, Result};

/// Steps between renormalisations of a running product.
pub const RENORMALIZE_EVERY: usize = 16;

/// `(1/m) log phi^t(A^m(x))` for `m = 1..=n`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RunningExponents {
    pub t_set: Vec<usize>,
    /// `values[k][m - 1]` belongs to `t_set[k]`.
    pub values: Vec<Vec<f64>>,
}

impl RunningExponents {
    pub fn horizon(&self) -> usize {
        self.values.first().map_or(0, Vec::len)
    }

    /// Values at the final horizon, one per index.
    pub fn last(&self) -> Vec<f64> {
        self.values.iter().map(|v| *v.last().expect("horizon >= 1")).collect()
    }

    pub fn at(&self, m: usize) -> Vec<f64> {
        self.values.iter().map(|v| v[m - 1]).collect()
    }
}

/// Running products of the exterior powers `A^{wedge t}`, each kept as
/// `exp(log_scale) * matrix` with the matrix renormalised to unit norm every
/// [`RENORMALIZE_EVERY`] steps. Since `||(A_n ... A_1)^{wedge t}|| =
/// phi^t(A_n ... A_1)`, no singular direction is lost to underflow.
struct ExteriorProducts {
    generators: Vec<Vec<Matrix>>,
    t_set: Vec<usize>,
    products: Vec<Matrix>,
    log_scales: Vec<f64>,
    steps: usize,
}

impl ExteriorProducts {
    fn new(c: &Cocycle, t_set: &[usize]) -> Self {
        let generators = t_set
            .iter()
            .map(|&t| {
                c.generators()
                    .iter()
                    .map(|g| matalg::exterior_power(g, t).expect("t checked against d"))
                    .collect()
            })
            .collect();
        let products = t_set
            .iter()
            .map(|&t| {
                let n = matalg::combinations(c.d(), t).len();
                Matrix::identity(n, n)
            })
            .collect();
        ExteriorProducts {
            generators,
            t_set: t_set.to_vec(),
            products,
            log_scales: vec![0.0; t_set.len()],
            steps: 0,
        }
    }

    fn push(&mut self, a: usize) {
        self.steps += 1;
        let renormalize = self.steps % RENORMALIZE_EVERY == 0;
        for k in 0..self.t_set.len() {
            self.products[k] = &self.generators[k][a] * &self.products[k];
            if renormalize {
                let norm = matalg::norm(&self.products[k]);
                self.products[k] /= norm;
                self.log_scales[k] += norm.ln();
            }
        }
    }

    /// `log phi^t` of the current product, aligned with `t_set`.
    fn log_phis(&self) -> Vec<f64> {
        self.products
            .iter()
            .zip(&self.log_scales)
            .map(|(p, l)| l + matalg::norm(p).ln())
            .collect()
    }
}

fn check_t_set(c: &Cocycle, t_set: &[usize]) -> Result<()> {
    if t_set.is_empty() || t_set.iter().any(|&t| t == 0 || t > c.d()) {
        return Err(Error::InvalidArgument(format!("indices {t_set:?} must lie in 1..={}", c.d())));
    }
    Ok(())
}

fn running(c: &Cocycle, symbols: &[usize], t_set: &[usize]) -> RunningExponents {
    let mut prod = ExteriorProducts::new(c, t_set);
    let mut values = vec![Vec::with_capacity(symbols.len()); t_set.len()];
    for (m, &a) in symbols.iter().enumerate() {
        prod.push(a);
        for (row, v) in values.iter_mut().zip(prod.log_phis()) {
            row.push(v / (m + 1) as f64);
        }
    }
    RunningExponents {
        t_set: t_set.to_vec(),
        values,
    }
}

/// Running exponents along the first `n` symbols of `itinerary`.
pub fn pointwise_exponents(c: &Cocycle, itinerary: &Word, n: usize, t_set: &[usize]) -> Result<RunningExponents> {
    check_t_set(c, t_set)?;
    if n == 0 || itinerary.len() < n {
        return Err(Error::InvalidArgument(format!(
            "horizon {n} needs an itinerary of at least that length (got {})",
            itinerary.len()
        )));
    }
    let prefix = Word::new(itinerary.symbols()[..n].to_vec());
    c.subshift().check_admissible(&prefix)?;
    Ok(running(c, prefix.symbols(), t_set))
}

/// `lambda_t = (1/|I|) log rho(A(I)^{wedge t})` for `t = 1..=d`.
pub fn periodic_exponents(c: &Cocycle, word: &Word) -> Result<Vec<f64>> {
    c.subshift().check_cyclic(word)?;
    let p = c.evaluate_word(word)?;
    let len = word.len() as f64;
    (1..=c.d())
        .map(|t| {
            let rho = if t == c.d() {
                p.determinant().abs()
            } else {
                matalg::spectral_radius(&matalg::exterior_power(&p, t)?)?
            };
            Ok(rho.ln() / len)
        })
        .collect()
}

/// Periodic exponent vectors and their convex hull.
#[derive(Debug, Clone, Serialize)]
pub struct SpectrumSample {
    pub points: Vec<Vec<f64>>,
    pub sources: Vec<Word>,
    /// Indices into `points` of the hull's vertices. The hull is an inner
    /// approximation of the Lyapunov spectrum.
    pub hull: Vec<usize>,
}

fn is_power(w: &Word) -> bool {
    let s = w.symbols();
    let n = s.len();
    (1..n).any(|p| n % p == 0 && (p..n).all(|i| s[i] == s[i - p]))
}

/// Cyclic words of period `<= max_period`, one per rotation class, skipping
/// proper powers (which repeat a shorter word's point).
pub fn cyclic_representatives(c: &Cocycle, max_period: usize) -> Vec<Word> {
    let shift = c.subshift();
    let mut seen = BTreeSet::new();
    let mut out = Vec::new();
    for w in shift.words_up_to(max_period) {
        if shift.check_cyclic(&w).is_err() || is_power(&w) {
            continue;
        }
        let rep = w.min_rotation();
        if seen.insert(rep.clone()) {
            out.push(rep);
        }
    }
    out
}

pub const HULL_TOL: f64 = 1e-9;

pub fn spectrum_hull(c: &Cocycle, max_period: usize) -> Result<SpectrumSample> {
    let sources = cyclic_representatives(c, max_period);
    let points = sources
        .par_iter()
        .map(|w| periodic_exponents(c, w))
        .collect::<Result<Vec<_>>>()?;
    let hull = geometry::hull_vertices(&points, HULL_TOL);
    Ok(SpectrumSample { points, sources, hull })
}

/// The itinerary built by the convexity construction and its running
/// exponents.
#[derive(Debug, Clone, Serialize)]
pub struct Witness {
    pub itinerary: Word,
    pub trace: RunningExponents,
    /// `gamma lambda(x) + (1 - gamma) lambda(y)`.
    pub target: Vec<f64>,
    /// Junctions (0-based) where no connecting word reached the certified
    /// constant and the best available one was used.
    pub below_certificate: Vec<usize>,
}

/// The length-`len` periodic prefix of `w`, lengthened to a whole number of
/// periods when it does not close up.
fn cyclic_prefix(c: &Cocycle, w: &Word, len: usize) -> Word {
    let unit = w.periodic_prefix(len);
    if c.subshift().check_cyclic(&unit).is_ok() {
        unit
    } else {
        w.periodic_prefix(len.div_ceil(w.len()) * w.len())
    }
}

struct Junction {
    k: Word,
    certified: bool,
}

/// Connecting word for `left -> right`: the shortest (then lexicographically
/// first) `K` with `|K| <= cert.k` whose ratio `min_t phi^t(LKR)/(phi^t(L)
/// phi^t(R))` reaches `cert.c`, else the best-ratio admissible `K`.
fn connect(c: &Cocycle, left: &Word, right: &Word, cert: &QMCertificate) -> Option<Junction> {
    let shift = c.subshift();
    let d = c.d();
    let t_set: Vec<usize> = (1..=d).collect();
    let log_phis = |w: &[usize]| {
        let mut p = ExteriorProducts::new(c, &t_set);
        for &a in w {
            p.push(a);
        }
        p.log_phis()
    };
    let (ll, lr) = (log_phis(left.symbols()), log_phis(right.symbols()));
    let mut candidates = vec![Word::empty()];
    candidates.extend(shift.words_up_to(cert.k));
    let mut best: Option<(f64, Word)> = None;
    for k in candidates {
        let joined = Word::new(vec![left.last()?]).concat(&k).concat(&Word::new(vec![right.first()?]));
        if !shift.is_admissible(&joined) {
            continue;
        }
        let whole: Vec<usize> = left.symbols().iter().chain(k.symbols()).chain(right.symbols()).copied().collect();
        let lw = log_phis(&whole);
        let ratio = (0..d).map(|i| (lw[i] - ll[i] - lr[i]).exp()).fold(f64::INFINITY, f64::min);
        if ratio >= cert.c {
            return Some(Junction { k, certified: true });
        }
        if best.as_ref().is_none_or(|(r, _)| ratio > *r) {
            best = Some((ratio, k));
        }
    }
    best.map(|(_, k)| Junction { k, certified: false })
}

/// Materialises the concatenation `omega_1 K_1 omega_2 K_2 ...` where
/// `omega_i` repeats the length-`i` block of `x` `floor(gamma i)` times for
/// odd `i` and of `y` `floor((1 - gamma) i)` times for even `i`, truncated to
/// `prefix_len` symbols.
pub fn convexity_witness(
    c: &Cocycle,
    x_word: &Word,
    y_word: &Word,
    gamma: f64,
    cert: &QMCertificate,
    prefix_len: usize,
) -> Result<Witness> {
    if !(0.0..=1.0).contains(&gamma) {
        return Err(Error::InvalidArgument(format!("gamma = {gamma} must lie in [0, 1]")));
    }
    if prefix_len == 0 {
        return Err(Error::InvalidArgument("prefix length must be positive".into()));
    }
    cert.check_compatible(c)?;
    let shift = c.subshift();
    shift.check_cyclic(x_word)?;
    shift.check_cyclic(y_word)?;
    let lx = periodic_exponents(c, x_word)?;
    let ly = periodic_exponents(c, y_word)?;
    let target: Vec<f64> = lx.iter().zip(&ly).map(|(a, b)| gamma * a + (1.0 - gamma) * b).collect();

    let mut itinerary: Vec<usize> = Vec::with_capacity(prefix_len + 64);
    let mut previous: Option<Word> = None;
    let mut below_certificate = Vec::new();
    let mut junction = 0;
    for i in 1usize.. {
        if itinerary.len() >= prefix_len {
            break;
        }
        let (source, reps) = if i % 2 == 1 {
            (x_word, (gamma * i as f64).floor() as usize)
        } else {
            (y_word, ((1.0 - gamma) * i as f64).floor() as usize)
        };
        if reps == 0 {
            continue;
        }
        let unit = cyclic_prefix(c, source, i);
        let mut block = Vec::with_capacity(unit.len() * reps);
        for _ in 0..reps {
            block.extend_from_slice(unit.symbols());
        }
        let block = Word::new(block);
        if let Some(prev) = &previous {
            let j = connect(c, prev, &block, cert).ok_or_else(|| Error::MissingConnection {
                junction,
                left: prev.to_string(),
                right: block.to_string(),
                max_len: cert.k,
            })?;
            if !j.certified {
                below_certificate.push(junction);
            }
            itinerary.extend_from_slice(j.k.symbols());
            junction += 1;
        }
        itinerary.extend_from_slice(block.symbols());
        previous = Some(block);
    }
    itinerary.truncate(prefix_len);
    let t_set: Vec<usize> = (1..=c.d()).collect();
    let trace = running(c, &itinerary, &t_set);
    Ok(Witness {
        itinerary: Word::new(itinerary),
        trace,
        target,
        below_certificate,
    })
}
