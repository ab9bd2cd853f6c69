//! Partitioned enumeration of `L(n)` with prefix products.
//!
//! The partition plan depends only on the subshift and `n`, never on the
//! thread count, and partial sums are merged in a fixed tree order, so results
//! are bit-identical however many workers run.

use rayon::prelude::*;

use crate::cocycle::Cocycle;
use crate::matalg::Matrix;
use crate::symbolic::Word;

/// Target number of partitions.
const MIN_PARTITIONS: u128 = 64;

/// `log(exp(a) + exp(b))`.
pub(crate) fn log_add(a: f64, b: f64) -> f64 {
    if a == f64::NEG_INFINITY {
        return b;
    }
    if b == f64::NEG_INFINITY {
        return a;
    }
    let (hi, lo) = if a >= b { (a, b) } else { (b, a) };
    hi + (lo - hi).exp().ln_1p()
}

/// Two-pass max-shifted log-sum-exp.
pub(crate) fn log_sum_exp(values: &[f64]) -> f64 {
    let max = values.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    if max == f64::NEG_INFINITY || max.is_nan() {
        return max;
    }
    if max == f64::INFINITY {
        return max;
    }
    let sum: f64 = values.iter().map(|v| (v - max).exp()).sum();
    max + sum.ln()
}

/// Pairwise merge in index order.
pub(crate) fn tree_log_sum(parts: &[f64]) -> f64 {
    match parts.len() {
        0 => f64::NEG_INFINITY,
        1 => parts[0],
        n => {
            let (l, r) = parts.split_at(n / 2);
            log_add(tree_log_sum(l), tree_log_sum(r))
        }
    }
}

fn plan(c: &Cocycle, n: usize) -> Vec<Word> {
    let shift = c.subshift();
    let depth = (1..=n)
        .find(|&l| shift.count_words(l) >= MIN_PARTITIONS)
        .unwrap_or(n);
    shift.enumerate_words(depth).collect()
}

fn visit<F, G>(c: &Cocycle, stack: &mut Vec<usize>, product: &Matrix, remaining: usize, f: &F, sink: &mut G)
where
    F: Fn(&Matrix) -> f64,
    G: FnMut(&[usize], f64),
{
    if remaining == 0 {
        sink(stack, f(product));
        return;
    }
    let shift = c.subshift();
    let last = *stack.last().expect("visit starts from a nonempty prefix");
    for a in 0..shift.q() {
        if shift.allowed(last, a) {
            let next = c.generator(a) * product;
            stack.push(a);
            visit(c, stack, &next, remaining - 1, f, sink);
            stack.pop();
        }
    }
}

fn for_each_in_partition<F, G>(c: &Cocycle, prefix: &Word, n: usize, f: &F, mut sink: G)
where
    F: Fn(&Matrix) -> f64,
    G: FnMut(&[usize], f64),
{
    let product = c.product(prefix.symbols());
    let mut stack = prefix.symbols().to_vec();
    visit(c, &mut stack, &product, n - prefix.len(), f, &mut sink);
}

/// `log sum_{I in L(n)} exp(f(A(I)))`.
pub(crate) fn log_sum<F>(c: &Cocycle, n: usize, f: F) -> f64
where
    F: Fn(&Matrix) -> f64 + Sync,
{
    let parts: Vec<f64> = plan(c, n)
        .par_iter()
        .map(|prefix| {
            let mut logs = Vec::new();
            for_each_in_partition(c, prefix, n, &f, |_, v| logs.push(v));
            log_sum_exp(&logs)
        })
        .collect();
    tree_log_sum(&parts)
}

/// `(I, f(A(I)))` for every `I in L(n)`, lexicographically.
pub(crate) fn collect<F>(c: &Cocycle, n: usize, f: F) -> Vec<(Word, f64)>
where
    F: Fn(&Matrix) -> f64 + Sync,
{
    let parts: Vec<Vec<(Word, f64)>> = plan(c, n)
        .par_iter()
        .map(|prefix| {
            let mut out = Vec::new();
            for_each_in_partition(c, prefix, n, &f, |w, v| out.push((Word::new(w.to_vec()), v)));
            out
        })
        .collect();
    parts.into_iter().flatten().collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matalg::diag;

    #[test]
    fn log_add_handles_extremes() {
        assert!((log_add(1234.0, 1232.0) - 1234.126928011042972496444).abs() < 1e-12);
        assert_eq!(log_add(f64::NEG_INFINITY, 2.0), 2.0);
        assert!((log_sum_exp(&[0.0, 0.0, 0.0]) - 3f64.ln()).abs() < 1e-15);
        assert_eq!(log_sum_exp(&[]), f64::NEG_INFINITY);
    }

    #[test]
    fn collect_matches_direct_evaluation() {
        let c = Cocycle::full_shift(vec![diag(&[2.0, 1.0]), diag(&[1.0, 3.0]), diag(&[0.5, 0.5])]).unwrap();
        let logs = collect(&c, 5, |m| m[(0, 0)].ln() + m[(1, 1)].ln());
        assert_eq!(logs.len(), 243);
        let words: Vec<Word> = c.subshift().enumerate_words(5).collect();
        for ((w, v), expected) in logs.iter().zip(&words) {
            assert_eq!(w, expected);
            let m = c.evaluate_word(w).unwrap();
            assert_eq!(*v, m[(0, 0)].ln() + m[(1, 1)].ln());
        }
    }

    #[test]
    fn independent_of_thread_count() {
        let c = Cocycle::full_shift(vec![
            Matrix::from_row_slice(2, 2, &[0.9, 0.3, -0.2, 0.4]),
            Matrix::from_row_slice(2, 2, &[0.1, 0.7, 0.5, -0.3]),
        ])
        .unwrap();
        let run = |threads| {
            rayon::ThreadPoolBuilder::new()
                .num_threads(threads)
                .build()
                .unwrap()
                .install(|| log_sum(&c, 11, |m| m.norm().ln()))
        };
        assert_eq!(run(1).to_bits(), run(7).to_bits());
    }
}
