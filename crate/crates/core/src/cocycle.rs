//! Locally constant cocycles: word products, singular value potentials,
//! recoding of block cocycles, holonomies and holonomy loops.

use std::collections::BTreeMap;

use crate::matalg::{self, Matrix, SingularValueProfile};
use crate::symbolic::{HomoclinicSpec, Subshift, Word};
use crate::{Error, Result};

/// Generators whose condition number exceeds this are rejected at load.
pub const MAX_CONDITION: f64 = 1e12;

fn check_generator(m: &Matrix, d: usize, label: &str) -> Result<()> {
    if m.shape() != (d, d) {
        return Err(Error::InvalidMatrix(format!(
            "generator {label} has shape {}x{}, expected {d}x{d}",
            m.nrows(),
            m.ncols()
        )));
    }
    let sv = matalg::singular_values(m)
        .map_err(|e| Error::InvalidMatrix(format!("generator {label}: {e}")))?;
    let cond = sv.condition_number();
    if !(cond <= MAX_CONDITION) {
        return Err(Error::Singular { cond });
    }
    Ok(())
}

fn check_holder(alpha: f64) -> Result<()> {
    if alpha > 0.0 && alpha <= 1.0 {
        Ok(())
    } else {
        Err(Error::InvalidArgument(format!(
            "Hoelder exponent {alpha} must lie in (0, 1]"
        )))
    }
}

/// A one-step locally constant `GL_d(R)` cocycle: one generator per symbol.
#[derive(Debug, Clone, PartialEq)]
pub struct Cocycle {
    subshift: Subshift,
    generators: Vec<Matrix>,
    holder_alpha: f64,
}

impl Cocycle {
    pub fn new(subshift: Subshift, generators: Vec<Matrix>, holder_alpha: f64) -> Result<Self> {
        if generators.len() != subshift.q() {
            return Err(Error::InvalidArgument(format!(
                "{} generators for an alphabet of {} symbols",
                generators.len(),
                subshift.q()
            )));
        }
        let d = generators[0].nrows();
        if d == 0 {
            return Err(Error::InvalidMatrix("zero-dimensional fiber".into()));
        }
        for (a, g) in generators.iter().enumerate() {
            check_generator(g, d, &(a + 1).to_string())?;
        }
        check_holder(holder_alpha)?;
        Ok(Cocycle {
            subshift,
            generators,
            holder_alpha,
        })
    }

    /// Cocycle over the full shift on `matrices.len()` symbols with `theta = 1/2`
    /// and `alpha = 1`.
    pub fn full_shift(matrices: Vec<Matrix>) -> Result<Self> {
        let shift = Subshift::full(matrices.len(), 0.5)?;
        Cocycle::new(shift, matrices, 1.0)
    }

    pub fn subshift(&self) -> &Subshift {
        &self.subshift
    }

    pub fn d(&self) -> usize {
        self.generators[0].nrows()
    }

    pub fn q(&self) -> usize {
        self.subshift.q()
    }

    pub fn holder_alpha(&self) -> f64 {
        self.holder_alpha
    }

    pub fn generators(&self) -> &[Matrix] {
        &self.generators
    }

    pub fn generator(&self, a: usize) -> &Matrix {
        &self.generators[a]
    }

    /// `max_a ||A_a||`.
    pub fn upsilon(&self) -> f64 {
        self.generators.iter().map(matalg::norm).fold(0.0, f64::max)
    }

    /// `min_a m(A_a)`, the smallest co-norm.
    pub fn varrho(&self) -> f64 {
        self.generators.iter().map(matalg::conorm).fold(f64::INFINITY, f64::min)
    }

    /// Whether every generator is a strict contraction.
    pub fn is_contracting(&self) -> bool {
        self.upsilon() < 1.0
    }

    /// Product `A_{i_{n-1}} ... A_{i_1} A_{i_0}` without admissibility checks.
    pub(crate) fn product(&self, symbols: &[usize]) -> Matrix {
        let d = self.d();
        symbols
            .iter()
            .fold(Matrix::identity(d, d), |acc, &a| &self.generators[a] * acc)
    }

    /// `A(I)`, later symbols multiplying on the left.
    pub fn evaluate_word(&self, word: &Word) -> Result<Matrix> {
        if word.is_empty() {
            return Err(Error::InvalidArgument("cannot evaluate the empty word".into()));
        }
        self.subshift.check_admissible(word)?;
        Ok(self.product(word.symbols()))
    }

    /// Singular values of `A(I)`.
    pub fn profile(&self, word: &Word) -> Result<SingularValueProfile> {
        Ok(matalg::singular_values_unchecked(&self.evaluate_word(word)?))
    }

    /// `log phi~^s(I)`; exact for one-step generators since `phi^s(A^n(.))`
    /// is constant on cylinders.
    pub fn log_phi_word(&self, word: &Word, s: f64) -> Result<f64> {
        matalg::log_phi_s(&self.evaluate_word(word)?, s)
    }

    pub fn phi_word(&self, word: &Word, s: f64) -> Result<f64> {
        self.log_phi_word(word, s).map(f64::exp)
    }

    /// `max_a ||A_a|| ||A_a^{-1}|| theta^alpha`; below 1 certifies fiber bunching.
    pub fn fiber_bunching_margin(&self) -> f64 {
        let contraction = self.subshift.theta().powf(self.holder_alpha);
        self.generators
            .iter()
            .map(|g| matalg::singular_values_unchecked(g).condition_number() * contraction)
            .fold(0.0, f64::max)
    }

    /// The adjoint cocycle: transposed generators over the time-reversed shift.
    pub fn adjoint_cocycle(&self) -> Cocycle {
        Cocycle {
            subshift: self.subshift.transposed(),
            generators: self.generators.iter().map(matalg::adjoint).collect(),
            holder_alpha: self.holder_alpha,
        }
    }

    /// Holonomy loop `psi_p^z = P^{-l/per} A^l(z)` for a one-step cocycle,
    /// where the canonical holonomies are identities.
    pub fn holonomy_loop(&self, h: &HomoclinicSpec) -> Result<Matrix> {
        h.validate(&self.subshift)?;
        let ell = h.ell();
        let along_p = self.product(h.p_word.periodic_prefix(ell).symbols());
        let along_z = self.product(h.z_block().symbols());
        along_p
            .lu()
            .solve(&along_z)
            .ok_or(Error::Singular { cond: f64::INFINITY })
    }
}

/// A cocycle whose generator at `x` depends on `x_{-k} ... x_k`.
#[derive(Debug, Clone)]
pub struct BlockCocycle {
    subshift: Subshift,
    radius: usize,
    generators: BTreeMap<Word, Matrix>,
    holder_alpha: f64,
}

impl BlockCocycle {
    pub fn new(
        subshift: Subshift,
        radius: usize,
        generators: BTreeMap<Word, Matrix>,
        holder_alpha: f64,
    ) -> Result<Self> {
        check_holder(holder_alpha)?;
        let width = 2 * radius + 1;
        let blocks: Vec<Word> = subshift.enumerate_words(width).collect();
        if blocks.is_empty() {
            return Err(Error::InvalidArgument("empty block language".into()));
        }
        let d = generators
            .values()
            .next()
            .map(|m| m.nrows())
            .ok_or_else(|| Error::InvalidArgument("block table is empty".into()))?;
        for b in &blocks {
            let m = generators.get(b).ok_or_else(|| {
                Error::InvalidArgument(format!("admissible block {b} has no generator"))
            })?;
            check_generator(m, d, &b.to_string())?;
        }
        for b in generators.keys() {
            if b.len() != width || !subshift.is_admissible(b) {
                return Err(Error::InvalidArgument(format!(
                    "block {b} is not an admissible word of length {width}"
                )));
            }
        }
        Ok(BlockCocycle {
            subshift,
            radius,
            generators,
            holder_alpha,
        })
    }

    pub fn radius(&self) -> usize {
        self.radius
    }

    pub fn d(&self) -> usize {
        self.generators.values().next().expect("nonempty table").nrows()
    }

    pub fn subshift(&self) -> &Subshift {
        &self.subshift
    }

    /// Product over the `|word| - 2k` positions whose full window lies inside
    /// `word`: position `j` uses the block `word[j .. j + 2k + 1]`.
    pub fn product(&self, word: &Word) -> Result<Matrix> {
        self.subshift.check_admissible(word)?;
        let width = 2 * self.radius + 1;
        if word.len() < width {
            return Err(Error::InvalidArgument(format!(
                "word {word} shorter than the block width {width}"
            )));
        }
        let d = self.d();
        Ok(word
            .symbols()
            .windows(width)
            .fold(Matrix::identity(d, d), |acc, w| &self.generators[&Word::new(w.to_vec())] * acc))
    }

    /// One-step cocycle over the higher-block presentation.
    pub fn recode(&self) -> Result<Recoded> {
        let width = 2 * self.radius + 1;
        let blocks: Vec<Word> = self.subshift.enumerate_words(width).collect();
        let adjacency: Vec<Vec<u8>> = blocks
            .iter()
            .map(|u| {
                blocks
                    .iter()
                    .map(|v| u8::from(u.symbols()[1..] == v.symbols()[..width - 1]))
                    .collect()
            })
            .collect();
        let shift = Subshift::new(&adjacency, self.subshift.theta())?;
        let generators = blocks.iter().map(|b| self.generators[b].clone()).collect();
        Ok(Recoded {
            cocycle: Cocycle::new(shift, generators, self.holder_alpha)?,
            blocks,
            radius: self.radius,
        })
    }
}

/// A recoded block cocycle together with its block alphabet.
#[derive(Debug, Clone)]
pub struct Recoded {
    pub cocycle: Cocycle,
    /// New symbol `i` stands for `blocks[i]`.
    pub blocks: Vec<Word>,
    pub radius: usize,
}

impl Recoded {
    /// Maps an original word of length `n + 2k` to the recoded word of length `n`.
    pub fn recode_word(&self, word: &Word) -> Result<Word> {
        let width = 2 * self.radius + 1;
        if word.len() < width {
            return Err(Error::InvalidArgument(format!(
                "word {word} shorter than the block width {width}"
            )));
        }
        word.symbols()
            .windows(width)
            .map(|w| {
                self.blocks
                    .binary_search(&Word::new(w.to_vec()))
                    .map_err(|_| Error::InvalidArgument(format!("window {} is not admissible", Word::new(w.to_vec()))))
            })
            .collect::<Result<Vec<_>>>()
            .map(Word::new)
    }
}

/// An eventually periodic two-sided itinerary, known on indices `>= -past.len()`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Ray {
    /// Symbols at indices `-past.len() .. -1`.
    pub past: Vec<usize>,
    /// Symbols at indices `0 .. prefix.len()`.
    pub prefix: Vec<usize>,
    /// Repeated forever after the prefix.
    pub period: Vec<usize>,
}

impl Ray {
    pub fn new(past: Word, prefix: Word, period: Word) -> Result<Self> {
        if period.is_empty() {
            return Err(Error::InvalidArgument("ray period must be nonempty".into()));
        }
        Ok(Ray {
            past: past.into_inner(),
            prefix: prefix.into_inner(),
            period: period.into_inner(),
        })
    }

    pub fn symbol(&self, i: isize) -> Option<usize> {
        if i < 0 {
            let back = (-i) as usize;
            return (back <= self.past.len()).then(|| self.past[self.past.len() - back]);
        }
        let i = i as usize;
        Some(if i < self.prefix.len() {
            self.prefix[i]
        } else {
            self.period[(i - self.prefix.len()) % self.period.len()]
        })
    }

    fn window(&self, j: usize, radius: usize) -> Option<Vec<usize>> {
        let j = j as isize;
        let r = radius as isize;
        (j - r..=j + r).map(|i| self.symbol(i)).collect()
    }

    /// Index beyond which the forward sequence is periodic.
    fn horizon(&self) -> usize {
        self.prefix.len() + self.period.len()
    }
}

/// Truncated holonomy `A^N(y)^{-1} A^N(x)` with its last increment.
#[derive(Debug, Clone)]
pub struct Holonomy {
    pub matrix: Matrix,
    /// `||H_N - H_{N-1}||` in the operator norm.
    pub residual: f64,
}

/// Cocycles given by a generator lookup on a finite window.
pub trait LocallyConstant {
    fn dim(&self) -> usize;
    fn window_radius(&self) -> usize;
    fn subshift(&self) -> &Subshift;
    fn generator_for(&self, window: &[usize]) -> Result<&Matrix>;
}

impl LocallyConstant for Cocycle {
    fn dim(&self) -> usize {
        self.d()
    }
    fn window_radius(&self) -> usize {
        0
    }
    fn subshift(&self) -> &Subshift {
        &self.subshift
    }
    fn generator_for(&self, window: &[usize]) -> Result<&Matrix> {
        self.subshift.check_symbol(window[0])?;
        Ok(&self.generators[window[0]])
    }
}

impl LocallyConstant for BlockCocycle {
    fn dim(&self) -> usize {
        self.d()
    }
    fn window_radius(&self) -> usize {
        self.radius
    }
    fn subshift(&self) -> &Subshift {
        &self.subshift
    }
    fn generator_for(&self, window: &[usize]) -> Result<&Matrix> {
        let w = Word::new(window.to_vec());
        self.generators
            .get(&w)
            .ok_or_else(|| Error::InvalidArgument(format!("block {w} is not admissible")))
    }
}

/// Stable holonomy from `x` to `y` truncated at depth `n`; `x` and `y` must
/// agree at every index `>= 0`. Positions whose generator windows coincide
/// contribute identical factors and are cancelled exactly, so the result
/// stabilises once `n` passes the last differing window.
pub fn holonomy<C: LocallyConstant>(c: &C, x: &Ray, y: &Ray, n: usize) -> Result<Holonomy> {
    let horizon = x.horizon().max(y.horizon()) + x.period.len() * y.period.len();
    for i in 0..horizon as isize {
        if x.symbol(i) != y.symbol(i) {
            return Err(Error::InvalidArgument(format!(
                "rays disagree at index {i}; y is not in the local stable set of x"
            )));
        }
    }
    let radius = c.window_radius();
    let windows = |ray: &Ray, j: usize| {
        ray.window(j, radius).ok_or_else(|| {
            Error::InvalidArgument(format!("ray past is shorter than the block radius {radius}"))
        })
    };
    // windows agree for j >= radius since the rays agree on indices >= 0
    let mut last_diff = 0;
    for j in 0..n.min(radius + 1) {
        if windows(x, j)? != windows(y, j)? {
            last_diff = j + 1;
        }
    }
    let d = c.dim();
    let truncated = |m: usize| -> Result<Matrix> {
        let mut ax = Matrix::identity(d, d);
        let mut ay = Matrix::identity(d, d);
        for j in 0..m {
            let wx = windows(x, j)?;
            let wy = windows(y, j)?;
            ax = c.generator_for(&wx)? * ax;
            ay = c.generator_for(&wy)? * ay;
        }
        ay.lu().solve(&ax).ok_or(Error::Singular { cond: f64::INFINITY })
    };
    let effective = n.min(last_diff);
    let matrix = truncated(effective)?;
    let residual = if n == 0 || n > last_diff {
        0.0
    } else {
        matalg::norm(&(&matrix - truncated(effective - 1)?))
    };
    Ok(Holonomy { matrix, residual })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matalg::{diag, rotation};
    use approx::assert_relative_eq;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn w(s: &str) -> Word {
        Word::parse(s).unwrap()
    }

    fn m2(a: f64, b: f64, c: f64, d: f64) -> Matrix {
        Matrix::from_row_slice(2, 2, &[a, b, c, d])
    }

    fn diagonal_pair() -> Cocycle {
        Cocycle::full_shift(vec![diag(&[2.0, 1.0]), diag(&[1.0, 3.0])]).unwrap()
    }

    fn random_cocycle(rng: &mut ChaCha8Rng, q: usize, d: usize) -> Cocycle {
        let gens = (0..q)
            .map(|_| Matrix::from_fn(d, d, |i, j| rng.gen_range(-1.0..1.0) + if i == j { 2.0 } else { 0.0 }))
            .collect();
        Cocycle::full_shift(gens).unwrap()
    }

    #[test]
    fn evaluate_word_examples() {
        let c = diagonal_pair();
        assert_eq!(c.evaluate_word(&w("12")).unwrap(), diag(&[2.0, 3.0]));
        assert_eq!(c.evaluate_word(&w("2")).unwrap(), diag(&[1.0, 3.0]));
        assert!(c.evaluate_word(&Word::empty()).is_err());
        let golden = Subshift::new(&[vec![1, 1], vec![1, 0]], 0.5).unwrap();
        let g = Cocycle::new(golden, vec![diag(&[2.0, 1.0]), diag(&[1.0, 3.0])], 1.0).unwrap();
        assert!(matches!(g.evaluate_word(&w("122")), Err(Error::Inadmissible { .. })));
    }

    #[test]
    fn cocycle_equation_is_exact() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let c = random_cocycle(&mut rng, 3, 3);
        for _ in 0..50 {
            let i: Vec<usize> = (0..rng.gen_range(1..6)).map(|_| rng.gen_range(0..3)).collect();
            let j: Vec<usize> = (0..rng.gen_range(1..6)).map(|_| rng.gen_range(0..3)).collect();
            let (wi, wj) = (Word::new(i), Word::new(j));
            let whole = c.evaluate_word(&wi.concat(&wj)).unwrap();
            let ij = c.evaluate_word(&wj).unwrap() * c.evaluate_word(&wi).unwrap();
            assert!((whole - &ij).amax() <= 1e-12 * ij.amax());
        }
    }

    #[test]
    fn phi_word_examples() {
        let id = Cocycle::full_shift(vec![Matrix::identity(2, 2); 2]).unwrap();
        assert_eq!(id.phi_word(&w("1212"), 1.3).unwrap(), 1.0);
        let c = diagonal_pair();
        assert_relative_eq!(c.phi_word(&w("11"), 1.0).unwrap(), 4.0, max_relative = 1e-14);
        assert_relative_eq!(c.phi_word(&w("11"), 1.5).unwrap(), 4.0, max_relative = 1e-14);
    }

    #[test]
    fn phi_word_is_submultiplicative_over_concatenation() {
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        let c = random_cocycle(&mut rng, 2, 3);
        let words = c.subshift().words_up_to(6);
        for _ in 0..400 {
            let i = &words[rng.gen_range(0..words.len())];
            let j = &words[rng.gen_range(0..words.len())];
            let s = rng.gen_range(0.0..5.0);
            let ij = c.phi_word(&i.concat(j), s).unwrap();
            let bound = c.phi_word(i, s).unwrap() * c.phi_word(j, s).unwrap();
            assert!(ij <= bound * (1.0 + 1e-12));
        }
    }

    #[test]
    fn fiber_bunching_examples() {
        let id = Cocycle::full_shift(vec![Matrix::identity(2, 2); 2]).unwrap();
        assert_relative_eq!(id.fiber_bunching_margin(), 0.5, max_relative = 1e-14);
        let c = Cocycle::full_shift(vec![diag(&[2.0, 1.0])]).unwrap();
        assert_relative_eq!(c.fiber_bunching_margin(), 1.0, max_relative = 1e-14);
        let conformal = Cocycle::full_shift(vec![rotation(0.3) * 2.0, rotation(1.1) * 0.5]).unwrap();
        assert_relative_eq!(conformal.fiber_bunching_margin(), 0.5, max_relative = 1e-12);
    }

    #[test]
    fn rejects_singular_and_mismatched_generators() {
        assert!(matches!(
            Cocycle::full_shift(vec![diag(&[1.0, 0.0]), diag(&[1.0, 1.0])]),
            Err(Error::Singular { .. })
        ));
        assert!(Cocycle::full_shift(vec![diag(&[1.0, 1e-13])]).is_err());
        assert!(Cocycle::full_shift(vec![diag(&[1.0, 1.0]), diag(&[1.0])]).is_err());
        let shift = Subshift::full(2, 0.5).unwrap();
        assert!(Cocycle::new(shift.clone(), vec![diag(&[1.0])], 1.0).is_err());
        assert!(Cocycle::new(shift, vec![diag(&[1.0]); 2], 0.0).is_err());
    }

    #[test]
    fn adjoint_reverses_words() {
        let sym = Cocycle::full_shift(vec![m2(1.0, 2.0, 2.0, 5.0), diag(&[3.0, 1.0])]).unwrap();
        assert_eq!(sym.adjoint_cocycle(), sym);
        let shift = Subshift::new(&[vec![1, 1, 0], vec![0, 1, 1], vec![1, 1, 1]], 0.5).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        let gens = (0..3).map(|_| Matrix::from_fn(2, 2, |_, _| rng.gen_range(-2.0..2.0))).collect();
        let c = Cocycle::new(shift, gens, 0.7).unwrap();
        let adj = c.adjoint_cocycle();
        assert_eq!(adj.adjoint_cocycle(), c);
        for word in c.subshift().words_up_to(5) {
            let lhs = adj.phi_word(&word.reversed(), 1.0).unwrap();
            let rhs = c.phi_word(&word, 1.0).unwrap();
            assert_relative_eq!(lhs, rhs, max_relative = 1e-12);
        }
    }

    #[test]
    fn holonomy_loop_hand_example() {
        let c = Cocycle::full_shift(vec![diag(&[2.0, 1.0]), m2(1.0, 1.0, 1.0, 2.0)]).unwrap();
        let h = HomoclinicSpec::new(w("1"), w("2"));
        let psi = c.holonomy_loop(&h).unwrap();
        // diag(1/4, 1) * (A_2 A_1) with A_2 A_1 = [[2, 1], [2, 2]]
        let expected = m2(0.5, 0.25, 2.0, 2.0);
        assert!((psi - expected).amax() < 1e-14);
    }

    #[test]
    fn trivial_excursion_gives_identity() {
        let c = Cocycle::full_shift(vec![m2(2.0, 1.0, 0.3, 1.0), m2(1.0, 1.0, 1.0, 2.0)]).unwrap();
        let psi = c.holonomy_loop(&HomoclinicSpec::new(w("1"), w("11"))).unwrap();
        assert!((psi - Matrix::identity(2, 2)).amax() < 1e-14);
    }

    #[test]
    fn holonomy_loop_conjugation_covariance() {
        // shifting z back by one step: loop becomes P^{-1} psi P
        let c = Cocycle::full_shift(vec![diag(&[2.0, 1.0]), m2(1.0, 1.0, 1.0, 2.0)]).unwrap();
        let psi = c.holonomy_loop(&HomoclinicSpec::new(w("1"), w("2"))).unwrap();
        let shifted = c.holonomy_loop(&HomoclinicSpec::new(w("1"), w("12"))).unwrap();
        let p = diag(&[2.0, 1.0]);
        let p_inv = diag(&[0.5, 1.0]);
        assert!((shifted - &p_inv * psi * &p).amax() < 1e-14);
    }

    #[test]
    fn holonomy_loop_rejects_bad_specs() {
        let golden = Subshift::new(&[vec![1, 1], vec![1, 0]], 0.5).unwrap();
        let c = Cocycle::new(golden, vec![diag(&[2.0, 1.0]), diag(&[1.0, 3.0])], 1.0).unwrap();
        assert!(c.holonomy_loop(&HomoclinicSpec::new(w("2"), w("1"))).is_err());
        assert!(c.holonomy_loop(&HomoclinicSpec::new(w("1"), w("22"))).is_err());
    }

    fn block_example() -> BlockCocycle {
        let shift = Subshift::full(2, 0.5).unwrap();
        let mut table = BTreeMap::new();
        for (i, b) in shift.enumerate_words(3).enumerate() {
            let x = 1.0 + i as f64 * 0.25;
            table.insert(b, m2(x, 0.5, -0.25, 1.0 + 0.1 * i as f64));
        }
        BlockCocycle::new(shift, 1, table, 1.0).unwrap()
    }

    #[test]
    fn recode_radius_zero_is_identity() {
        let shift = Subshift::full(2, 0.5).unwrap();
        let table: BTreeMap<Word, Matrix> =
            [(w("1"), diag(&[2.0, 1.0])), (w("2"), diag(&[1.0, 3.0]))].into_iter().collect();
        let rec = BlockCocycle::new(shift, 0, table, 1.0).unwrap().recode().unwrap();
        assert_eq!(rec.cocycle, diagonal_pair());
    }

    #[test]
    fn recode_full_two_shift_radius_one() {
        let rec = block_example().recode().unwrap();
        assert_eq!(rec.cocycle.q(), 8);
        let sub = rec.cocycle.subshift();
        for (i, u) in rec.blocks.iter().enumerate() {
            for (j, v) in rec.blocks.iter().enumerate() {
                assert_eq!(sub.allowed(i, j), u.symbols()[1..] == v.symbols()[..2]);
            }
        }
    }

    #[test]
    fn recoded_products_match_block_products() {
        let b = block_example();
        let rec = b.recode().unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        for _ in 0..50 {
            let len = rng.gen_range(3..12);
            let word = Word::new((0..len).map(|_| rng.gen_range(0..2)).collect());
            let direct = b.product(&word).unwrap();
            let recoded = rec.cocycle.evaluate_word(&rec.recode_word(&word).unwrap()).unwrap();
            assert_eq!(direct, recoded);
        }
    }

    #[test]
    fn block_cocycle_requires_complete_table() {
        let shift = Subshift::full(2, 0.5).unwrap();
        let table: BTreeMap<Word, Matrix> = [(w("1"), diag(&[2.0, 1.0]))].into_iter().collect();
        assert!(BlockCocycle::new(shift, 0, table, 1.0).is_err());
    }

    #[test]
    fn one_step_holonomy_is_identity() {
        let c = diagonal_pair();
        let x = Ray::new(w("1"), w("12"), w("2")).unwrap();
        let y = Ray::new(w("2"), w("12"), w("2")).unwrap();
        for n in 0..5 {
            let h = holonomy(&c, &x, &y, n).unwrap();
            assert_eq!(h.matrix, Matrix::identity(2, 2));
            assert_eq!(h.residual, 0.0);
        }
        let same = holonomy(&c, &x, &x, 4).unwrap();
        assert_eq!(same.matrix, Matrix::identity(2, 2));
    }

    #[test]
    fn block_holonomy_stabilises_after_radius() {
        let b = block_example();
        let x = Ray::new(w("11"), w("21"), w("12")).unwrap();
        let y = Ray::new(w("22"), w("21"), w("12")).unwrap();
        let h1 = holonomy(&b, &x, &y, 1).unwrap();
        let h2 = holonomy(&b, &x, &y, 2).unwrap();
        let h3 = holonomy(&b, &x, &y, 3).unwrap();
        // only position 0 sees a different window (x_{-1} differs)
        let ax = b.generator_for(&[0, 1, 0]).unwrap();
        let ay = b.generator_for(&[1, 1, 0]).unwrap();
        let direct = ay.clone().try_inverse().unwrap() * ax;
        assert!((&h1.matrix - &direct).amax() < 1e-14);
        assert!(h1.residual > 0.0);
        assert_eq!(h2.matrix, h1.matrix);
        assert_eq!(h3.matrix, h1.matrix);
        assert_eq!(h2.residual, 0.0);
        assert_eq!(h3.residual, 0.0);
        assert!(holonomy(&b, &x, &Ray::new(w("22"), w("22"), w("12")).unwrap(), 3).is_err());
    }

    #[test]
    fn upsilon_and_varrho() {
        let c = diagonal_pair();
        assert_relative_eq!(c.upsilon(), 3.0, max_relative = 1e-14);
        assert_relative_eq!(c.varrho(), 1.0, max_relative = 1e-14);
        assert!(!c.is_contracting());
    }
}
