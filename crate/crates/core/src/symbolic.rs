//! Subshifts of finite type: adjacency matrices, admissible words and
//! connecting words.

use std::fmt;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::{Error, Result};

/// Result of the primitivity test on a 0/1 matrix.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Primitivity {
    pub is_primitive: bool,
    /// Least `N <= q^2` with `T^N` entrywise positive.
    pub mixing_time: Option<usize>,
}

fn validate_square_01(rows: &[Vec<u8>]) -> Result<usize> {
    let q = rows.len();
    if q == 0 {
        return Err(Error::InvalidAdjacency("empty matrix".into()));
    }
    for (i, row) in rows.iter().enumerate() {
        if row.len() != q {
            return Err(Error::InvalidAdjacency(format!(
                "row {} has {} entries, expected {q}",
                i + 1,
                row.len()
            )));
        }
        if let Some(j) = row.iter().position(|&e| e > 1) {
            return Err(Error::InvalidAdjacency(format!(
                "entry ({}, {}) = {} is not 0/1",
                i + 1,
                j + 1,
                row[j]
            )));
        }
    }
    Ok(q)
}

fn bool_matmul(a: &[Vec<bool>], b: &[Vec<bool>]) -> Vec<Vec<bool>> {
    let q = a.len();
    let mut out = vec![vec![false; q]; q];
    for i in 0..q {
        for k in 0..q {
            if a[i][k] {
                for j in 0..q {
                    out[i][j] |= b[k][j];
                }
            }
        }
    }
    out
}

/// Searches for the least `N <= q^2` such that `T^N` is entrywise positive.
pub fn primitivity(rows: &[Vec<u8>]) -> Result<Primitivity> {
    let q = validate_square_01(rows)?;
    let t: Vec<Vec<bool>> = rows
        .iter()
        .map(|r| r.iter().map(|&e| e == 1).collect())
        .collect();
    let mut power = t.clone();
    for n in 1..=q * q {
        if power.iter().all(|r| r.iter().all(|&e| e)) {
            return Ok(Primitivity {
                is_primitive: true,
                mixing_time: Some(n),
            });
        }
        power = bool_matmul(&power, &t);
    }
    Ok(Primitivity {
        is_primitive: false,
        mixing_time: None,
    })
}

/// A finite word over the alphabet, stored 0-based.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct Word(Vec<usize>);

impl Word {
    pub fn new(symbols: Vec<usize>) -> Self {
        Word(symbols)
    }

    pub fn empty() -> Self {
        Word(Vec::new())
    }

    /// Builds a word from 1-based symbols.
    pub fn from_one_based(symbols: &[usize]) -> Result<Self> {
        symbols
            .iter()
            .map(|&s| {
                s.checked_sub(1).ok_or(Error::InvalidArgument(
                    "symbols are 1-based; 0 is not a symbol".into(),
                ))
            })
            .collect::<Result<Vec<_>>>()
            .map(Word)
    }

    /// Parses `"1212"` (single-digit symbols) or a separated list such as
    /// `"1.2.10"`, `"1,2,10"` or `"1 2 10"`. Empty string or `"-"` is the empty
    /// word.
    pub fn parse(text: &str) -> Result<Self> {
        let text = text.trim();
        if text.is_empty() || text == "-" {
            return Ok(Word::empty());
        }
        let parts: Vec<&str> = if text.contains(['.', ',', ' ']) {
            text.split(['.', ',', ' ']).filter(|p| !p.is_empty()).collect()
        } else {
            text.split("").filter(|p| !p.is_empty()).collect()
        };
        let symbols = parts
            .iter()
            .map(|p| {
                p.parse::<usize>()
                    .map_err(|_| Error::InvalidArgument(format!("bad symbol {p:?} in word {text:?}")))
            })
            .collect::<Result<Vec<_>>>()?;
        Word::from_one_based(&symbols)
    }

    pub fn symbols(&self) -> &[usize] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn first(&self) -> Option<usize> {
        self.0.first().copied()
    }

    pub fn last(&self) -> Option<usize> {
        self.0.last().copied()
    }

    pub fn concat(&self, other: &Word) -> Word {
        let mut v = self.0.clone();
        v.extend_from_slice(&other.0);
        Word(v)
    }

    pub fn reversed(&self) -> Word {
        Word(self.0.iter().rev().copied().collect())
    }

    /// Lexicographically least rotation.
    pub fn min_rotation(&self) -> Word {
        let n = self.0.len();
        (0..n)
            .map(|r| Word(self.0[r..].iter().chain(&self.0[..r]).copied().collect()))
            .min()
            .unwrap_or_default()
    }

    /// The first `len` symbols of the periodic sequence `self self self ...`.
    pub fn periodic_prefix(&self, len: usize) -> Word {
        assert!(!self.0.is_empty(), "periodic prefix of the empty word");
        Word(self.0.iter().copied().cycle().take(len).collect())
    }

    pub fn into_inner(self) -> Vec<usize> {
        self.0
    }
}

impl fmt::Display for Word {
    /// Single-digit symbols print concatenated (`121`); larger alphabets print
    /// dot-separated (`1.12.3`). The empty word prints as `-`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return write!(f, "-");
        }
        let wide = self.0.iter().any(|&s| s >= 9);
        for (i, s) in self.0.iter().enumerate() {
            if wide && i > 0 {
                write!(f, ".")?;
            }
            write!(f, "{}", s + 1)?;
        }
        Ok(())
    }
}

impl From<Vec<usize>> for Word {
    fn from(v: Vec<usize>) -> Self {
        Word(v)
    }
}

impl Serialize for Word {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for Word {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        Word::parse(&s).map_err(serde::de::Error::custom)
    }
}

/// A mixing subshift of finite type.
#[derive(Debug, Clone, PartialEq)]
pub struct Subshift {
    adjacency: Vec<Vec<bool>>,
    theta: f64,
    mixing_time: usize,
}

impl Subshift {
    pub fn new(rows: &[Vec<u8>], theta: f64) -> Result<Self> {
        let q = validate_square_01(rows)?;
        if !(theta > 0.0 && theta < 1.0) {
            return Err(Error::InvalidArgument(format!(
                "metric parameter theta = {theta} must lie in (0, 1)"
            )));
        }
        for i in 0..q {
            if rows[i].iter().all(|&e| e == 0) {
                return Err(Error::InvalidAdjacency(format!("row {} has no 1", i + 1)));
            }
            if rows.iter().all(|r| r[i] == 0) {
                return Err(Error::InvalidAdjacency(format!("column {} has no 1", i + 1)));
            }
        }
        let prim = primitivity(rows)?;
        let mixing_time = prim
            .mixing_time
            .ok_or(Error::NotPrimitive { bound: q * q })?;
        Ok(Subshift {
            adjacency: rows
                .iter()
                .map(|r| r.iter().map(|&e| e == 1).collect())
                .collect(),
            theta,
            mixing_time,
        })
    }

    /// Full shift on `q` symbols.
    pub fn full(q: usize, theta: f64) -> Result<Self> {
        Subshift::new(&vec![vec![1u8; q]; q], theta)
    }

    pub fn q(&self) -> usize {
        self.adjacency.len()
    }

    pub fn theta(&self) -> f64 {
        self.theta
    }

    pub fn mixing_time(&self) -> usize {
        self.mixing_time
    }

    pub fn allowed(&self, a: usize, b: usize) -> bool {
        self.adjacency[a][b]
    }

    pub fn adjacency_rows(&self) -> Vec<Vec<u8>> {
        self.adjacency
            .iter()
            .map(|r| r.iter().map(|&b| u8::from(b)).collect())
            .collect()
    }

    /// Subshift with transposed adjacency (time reversal).
    pub fn transposed(&self) -> Subshift {
        let q = self.q();
        Subshift {
            adjacency: (0..q)
                .map(|i| (0..q).map(|j| self.adjacency[j][i]).collect())
                .collect(),
            theta: self.theta,
            // T^N > 0 iff (T^T)^N > 0
            mixing_time: self.mixing_time,
        }
    }

    pub fn check_symbol(&self, s: usize) -> Result<()> {
        if s < self.q() {
            Ok(())
        } else {
            Err(Error::SymbolOutOfRange {
                symbol: s + 1,
                q: self.q(),
            })
        }
    }

    /// Checks symbols and transitions; positions in errors are 1-based.
    pub fn check_admissible(&self, w: &Word) -> Result<()> {
        for &s in w.symbols() {
            self.check_symbol(s)?;
        }
        for (i, pair) in w.symbols().windows(2).enumerate() {
            if !self.allowed(pair[0], pair[1]) {
                return Err(Error::Inadmissible {
                    position: i + 1,
                    from: pair[0] + 1,
                    to: pair[1] + 1,
                });
            }
        }
        Ok(())
    }

    pub fn is_admissible(&self, w: &Word) -> bool {
        self.check_admissible(w).is_ok()
    }

    /// Admissible and the wrap-around transition `last -> first` is allowed.
    pub fn check_cyclic(&self, w: &Word) -> Result<()> {
        if w.is_empty() {
            return Err(Error::InvalidArgument("periodic word must be nonempty".into()));
        }
        self.check_admissible(w)?;
        let (first, last) = (w.symbols()[0], w.symbols()[w.len() - 1]);
        if !self.allowed(last, first) {
            return Err(Error::NotCyclic {
                last: last + 1,
                first: first + 1,
            });
        }
        Ok(())
    }

    /// Number of admissible words of length `n`: the entry sum of `T^{n-1}`.
    /// Saturates at `u128::MAX`.
    pub fn count_words(&self, n: usize) -> u128 {
        if n == 0 {
            return 1;
        }
        let q = self.q();
        let mut counts = vec![1u128; q];
        for _ in 1..n {
            let mut next = vec![0u128; q];
            for (a, &ca) in counts.iter().enumerate() {
                for (b, nb) in next.iter_mut().enumerate() {
                    if self.adjacency[a][b] {
                        *nb = nb.saturating_add(ca);
                    }
                }
            }
            counts = next;
        }
        counts.into_iter().fold(0u128, |acc, c| acc.saturating_add(c))
    }

    /// All admissible words of length `n` in lexicographic order.
    pub fn enumerate_words(&self, n: usize) -> WordIter<'_> {
        WordIter::new(self, Word::empty(), n)
    }

    /// Admissible words of length `n` starting with `prefix`, lexicographically.
    pub fn words_with_prefix(&self, prefix: Word, n: usize) -> WordIter<'_> {
        WordIter::new(self, prefix, n)
    }

    /// Admissible words of every length `1..=max_len`, grouped by length.
    pub fn words_up_to(&self, max_len: usize) -> Vec<Word> {
        (1..=max_len).flat_map(|n| self.enumerate_words(n)).collect()
    }

    /// Shortest word `W` (lexicographic among equals) with `a W b` admissible
    /// and `|W| <= max_len`.
    pub fn connect(&self, a: usize, b: usize, max_len: usize) -> Option<Word> {
        let q = self.q();
        // reach[r][s]: a path of r transitions leads from s to b
        let mut reach = vec![vec![false; q]; max_len + 2];
        for s in 0..q {
            reach[0][s] = s == b;
        }
        for r in 1..=max_len + 1 {
            for s in 0..q {
                reach[r][s] = (0..q).any(|u| self.adjacency[s][u] && reach[r - 1][u]);
            }
        }
        let len = (0..=max_len).find(|&l| reach[l + 1][a])?;
        let mut word = Vec::with_capacity(len);
        let mut cur = a;
        for remaining in (0..len).rev() {
            let next = (0..q)
                .find(|&u| self.adjacency[cur][u] && reach[remaining + 1][u])
                .expect("reachability table guarantees a successor");
            word.push(next);
            cur = next;
        }
        Some(Word(word))
    }

    /// Every admissible word of length `len` joining `a` to `b` as `a W b`,
    /// lexicographically.
    pub fn bridges(&self, a: usize, b: usize, len: usize) -> Vec<Word> {
        let q = self.q();
        if len == 0 {
            return if self.allowed(a, b) { vec![Word::empty()] } else { Vec::new() };
        }
        let mut out = Vec::new();
        let starts = (0..q).filter(|&s| self.allowed(a, s));
        for s in starts {
            for w in self.words_with_prefix(Word(vec![s]), len) {
                if self.allowed(w.symbols()[len - 1], b) {
                    out.push(w);
                }
            }
        }
        out
    }
}

/// Lexicographic depth-first enumeration of admissible extensions of a prefix.
pub struct WordIter<'a> {
    shift: &'a Subshift,
    target: usize,
    stack: Vec<usize>,
    prefix_len: usize,
    started: bool,
    done: bool,
}

impl<'a> WordIter<'a> {
    fn new(shift: &'a Subshift, prefix: Word, target: usize) -> Self {
        let prefix_len = prefix.len();
        let done = target == 0 || prefix_len > target || !shift.is_admissible(&prefix);
        WordIter {
            shift,
            target,
            stack: prefix.into_inner(),
            prefix_len,
            started: false,
            done,
        }
    }

    fn next_symbol(&self, from: Option<usize>, after: Option<usize>) -> Option<usize> {
        let start = after.map_or(0, |a| a + 1);
        (start..self.shift.q()).find(|&s| from.is_none_or(|f| self.shift.allowed(f, s)))
    }

    /// Extends the stack greedily to full length; false if stuck.
    fn descend(&mut self) -> bool {
        while self.stack.len() < self.target {
            match self.next_symbol(self.stack.last().copied(), None) {
                Some(s) => self.stack.push(s),
                None => return false,
            }
        }
        true
    }

    /// Moves to the next sibling at the deepest position possible.
    fn advance(&mut self) -> bool {
        while self.stack.len() > self.prefix_len {
            let cur = self.stack.pop().expect("nonempty stack");
            let parent = self.stack.last().copied();
            if let Some(s) = self.next_symbol(parent, Some(cur)) {
                self.stack.push(s);
                if self.descend() {
                    return true;
                }
            }
        }
        false
    }
}

impl Iterator for WordIter<'_> {
    type Item = Word;

    fn next(&mut self) -> Option<Word> {
        if self.done {
            return None;
        }
        let ok = if !self.started {
            self.started = true;
            self.descend() || self.advance()
        } else {
            self.advance()
        };
        if ok {
            Some(Word(self.stack.clone()))
        } else {
            self.done = true;
            None
        }
    }
}

/// A homoclinic orbit of a periodic point, given symbolically.
///
/// The point `z` agrees with the periodic point `p` at all indices `<= 0`,
/// reads `p_0 b_1 ... b_{l-1}` on `[0, l)` and continues as `p` from index `l`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct HomoclinicSpec {
    pub p_word: Word,
    pub excursion: Word,
}

impl HomoclinicSpec {
    pub fn new(p_word: Word, excursion: Word) -> Self {
        HomoclinicSpec { p_word, excursion }
    }

    /// Return time `l = 1 + |excursion|`.
    pub fn ell(&self) -> usize {
        1 + self.excursion.len()
    }

    /// The block `p_0 b_1 ... b_{l-1}` read by `z` on `[0, l)`.
    pub fn z_block(&self) -> Word {
        let mut v = vec![self.p_word.symbols()[0]];
        v.extend_from_slice(self.excursion.symbols());
        Word(v)
    }

    /// Checks admissibility of `...ppp (p_0 excursion) ppp...` and that `l` is
    /// a multiple of the period, so that `f^l z` lies in the local stable set
    /// of `p` itself.
    pub fn validate(&self, shift: &Subshift) -> Result<()> {
        shift.check_cyclic(&self.p_word)?;
        let period = self.p_word.len();
        if self.ell() % period != 0 {
            return Err(Error::InvalidArgument(format!(
                "return time {} is not a multiple of the period {period}",
                self.ell()
            )));
        }
        let mut full = self.z_block();
        full = full.concat(&Word(vec![self.p_word.symbols()[0]]));
        shift.check_admissible(&full)?;
        Ok(())
    }

    /// The same orbit read backwards in time, for the adjoint cocycle.
    pub fn reversed(&self) -> HomoclinicSpec {
        let p = self.p_word.symbols();
        let mut rp = vec![p[0]];
        rp.extend(p[1..].iter().rev());
        HomoclinicSpec {
            p_word: Word(rp),
            excursion: self.excursion.reversed(),
        }
    }

    /// Parses `--ell`-style input, checking `ell = 1 + |excursion|`.
    pub fn with_ell(p_word: Word, excursion: Word, ell: usize) -> Result<Self> {
        let h = HomoclinicSpec::new(p_word, excursion);
        if h.ell() != ell {
            return Err(Error::InvalidArgument(format!(
                "ell = {ell} but excursion has length {} (expected ell = {})",
                h.excursion.len(),
                h.ell()
            )));
        }
        Ok(h)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn golden() -> Subshift {
        Subshift::new(&[vec![1, 1], vec![1, 0]], 0.5).unwrap()
    }

    fn w(s: &str) -> Word {
        Word::parse(s).unwrap()
    }

    #[test]
    fn primitivity_examples() {
        let full = primitivity(&[vec![1, 1], vec![1, 1]]).unwrap();
        assert_eq!(full, Primitivity { is_primitive: true, mixing_time: Some(1) });
        let diag = primitivity(&[vec![1, 0], vec![0, 1]]).unwrap();
        assert_eq!(diag, Primitivity { is_primitive: false, mixing_time: None });
        let g = primitivity(&[vec![1, 1], vec![1, 0]]).unwrap();
        assert_eq!(g.mixing_time, Some(2));
    }

    #[test]
    fn primitivity_rejects_bad_input() {
        assert!(primitivity(&[vec![1, 1]]).is_err());
        assert!(primitivity(&[vec![1, 2], vec![1, 1]]).is_err());
        assert!(primitivity(&[]).is_err());
    }

    #[test]
    fn subshift_rejects_dead_symbols_and_non_primitive() {
        assert!(Subshift::new(&[vec![1, 0], vec![0, 0]], 0.5).is_err());
        assert!(matches!(
            Subshift::new(&[vec![1, 0], vec![0, 1]], 0.5),
            Err(Error::NotPrimitive { bound: 4 })
        ));
        // periodic cycle: irreducible but not aperiodic
        assert!(Subshift::new(&[vec![0, 1], vec![1, 0]], 0.5).is_err());
        assert!(Subshift::full(2, 1.0).is_err());
    }

    #[test]
    fn count_words_examples() {
        assert_eq!(Subshift::full(2, 0.5).unwrap().count_words(3), 8);
        assert_eq!(golden().count_words(4), 8);
        assert_eq!(golden().count_words(1), 2);
        assert_eq!(Subshift::full(3, 0.5).unwrap().count_words(1), 3);
    }

    #[test]
    fn enumerate_examples() {
        let g: Vec<String> = golden().enumerate_words(2).map(|w| w.to_string()).collect();
        assert_eq!(g, ["11", "12", "21"]);
        let f2: Vec<String> = Subshift::full(2, 0.5)
            .unwrap()
            .enumerate_words(1)
            .map(|w| w.to_string())
            .collect();
        assert_eq!(f2, ["1", "2"]);
        let f3: Vec<Word> = Subshift::full(3, 0.5).unwrap().enumerate_words(2).collect();
        assert_eq!(f3.len(), 9);
        assert_eq!(f3[0], w("11"));
        assert_eq!(f3[8], w("33"));
    }

    #[test]
    fn enumerate_with_prefix() {
        let g = golden();
        let ws: Vec<String> = g.words_with_prefix(w("2"), 3).map(|x| x.to_string()).collect();
        assert_eq!(ws, ["211", "212"]);
        assert_eq!(g.words_with_prefix(w("22"), 3).count(), 0);
        assert_eq!(g.words_with_prefix(w("12"), 2).count(), 1);
    }

    #[test]
    fn connect_examples() {
        let full = Subshift::full(2, 0.5).unwrap();
        assert_eq!(full.connect(0, 1, 3), Some(Word::empty()));
        assert_eq!(full.connect(0, 0, 3), Some(Word::empty()));
        assert_eq!(golden().connect(1, 1, 3), Some(w("1")));
        assert_eq!(golden().connect(1, 1, 0), None);
    }

    #[test]
    fn bridges_lists_all_connections() {
        let g = golden();
        let b: Vec<String> = g.bridges(1, 1, 2).iter().map(|x| x.to_string()).collect();
        assert_eq!(b, ["11"]);
        assert_eq!(g.bridges(1, 1, 0).len(), 0);
        assert_eq!(g.bridges(0, 0, 0).len(), 1);
    }

    #[test]
    fn word_parsing_and_display() {
        assert_eq!(w("121").symbols(), &[0, 1, 0]);
        assert_eq!(w("1.12.3").symbols(), &[0, 11, 2]);
        assert_eq!(w("1.12.3").to_string(), "1.12.3");
        assert_eq!(w("-"), Word::empty());
        assert!(Word::parse("10x").is_err());
        assert!(Word::parse("0").is_err());
        assert_eq!(w("2121").min_rotation(), w("1212"));
        assert_eq!(w("12").periodic_prefix(5), w("12121"));
    }

    #[test]
    fn inadmissible_words_name_the_transition() {
        let err = golden().check_admissible(&w("1221")).unwrap_err();
        assert!(matches!(err, Error::Inadmissible { position: 2, from: 2, to: 2 }));
        assert!(golden().check_cyclic(&w("12")).is_ok());
        assert!(golden().check_cyclic(&w("2")).is_err());
    }

    #[test]
    fn homoclinic_validation() {
        let full = Subshift::full(2, 0.5).unwrap();
        let h = HomoclinicSpec::new(w("1"), w("2"));
        assert_eq!(h.ell(), 2);
        assert_eq!(h.z_block(), w("12"));
        h.validate(&full).unwrap();
        // golden mean: p = 2 is not a fixed point
        assert!(HomoclinicSpec::new(w("2"), w("1")).validate(&golden()).is_err());
        // period 2 needs an even return time
        HomoclinicSpec::new(w("12"), w("1")).validate(&full).unwrap();
        assert!(HomoclinicSpec::new(w("12"), w("11")).validate(&full).is_err());
        HomoclinicSpec::new(w("12"), w("221")).validate(&golden()).unwrap_err();
        HomoclinicSpec::new(w("12"), w("2")).validate(&golden()).unwrap();
        HomoclinicSpec::new(w("12"), w("111")).validate(&golden()).unwrap();
        assert!(HomoclinicSpec::with_ell(w("1"), w("2"), 3).is_err());
    }

    #[test]
    fn homoclinic_reversal() {
        let h = HomoclinicSpec::new(w("123"), w("21321"));
        let r = h.reversed();
        assert_eq!(r.p_word, w("132"));
        assert_eq!(r.excursion, w("12312"));
        assert_eq!(r.reversed(), h);
    }

    mod props {
        use super::*;
        use proptest::prelude::*;

        fn arb_subshift() -> impl Strategy<Value = Subshift> {
            (2usize..=3)
                .prop_flat_map(|q| proptest::collection::vec(proptest::collection::vec(0u8..=1, q), q))
                .prop_filter_map("primitive", |rows| Subshift::new(&rows, 0.5).ok())
        }

        proptest! {
            #[test]
            fn counts_are_submultiplicative(s in arb_subshift(), n in 1usize..6, m in 1usize..6) {
                prop_assert!(s.count_words(n + m) <= s.count_words(n) * s.count_words(m));
            }

            #[test]
            fn enumeration_is_admissible_sorted_and_complete(s in arb_subshift(), n in 1usize..7) {
                let words: Vec<Word> = s.enumerate_words(n).collect();
                prop_assert_eq!(words.len() as u128, s.count_words(n));
                prop_assert!(words.iter().all(|w| s.is_admissible(w) && w.len() == n));
                prop_assert!(words.windows(2).all(|p| p[0] < p[1]));
            }

            #[test]
            fn connect_succeeds_within_mixing_time(s in arb_subshift()) {
                for a in 0..s.q() {
                    for b in 0..s.q() {
                        let k = s.connect(a, b, s.mixing_time());
                        prop_assert!(k.is_some());
                        let k = k.unwrap();
                        let full = Word::new(vec![a]).concat(&k).concat(&Word::new(vec![b]));
                        prop_assert!(s.is_admissible(&full));
                    }
                }
            }
        }
    }
}
