//! Words in a free basis, finite presentations and finite-quotient
//! specifications — the shared vocabulary of every other module.
//!
//! Generators are indexed 0..n-1; names are display-only. Relators are
//! stored cyclically reduced, normalized on load.

use crate::fplinalg::MatrixFp;
use crate::{Error, Result};

/// One signed generator occurrence.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Letter {
    pub generator: usize,
    pub inverse: bool,
}

impl Letter {
    pub fn new(generator: usize, inverse: bool) -> Self {
        Letter { generator, inverse }
    }

    pub fn inverted(self) -> Self {
        Letter { generator: self.generator, inverse: !self.inverse }
    }

    fn cancels(self, other: Letter) -> bool {
        self.generator == other.generator && self.inverse != other.inverse
    }
}

/// A word over signed generators. Not automatically reduced; call
/// [`Word::free_reduce`] for the normal form.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct Word {
    letters: Vec<Letter>,
}

impl Word {
    pub fn new(letters: Vec<Letter>) -> Self {
        Word { letters }
    }

    pub fn empty() -> Self {
        Word { letters: Vec::new() }
    }

    /// Parse from (generator index, sign) pairs, sign being +1 or -1.
    pub fn from_signed(pairs: &[(usize, i32)]) -> Self {
        Word {
            letters: pairs.iter().map(|&(g, s)| Letter::new(g, s < 0)).collect(),
        }
    }

    pub fn letters(&self) -> &[Letter] {
        &self.letters
    }

    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }

    pub fn push(&mut self, l: Letter) {
        self.letters.push(l);
    }

    pub fn concat(&self, other: &Word) -> Word {
        let mut letters = self.letters.clone();
        letters.extend_from_slice(&other.letters);
        Word { letters }
    }

    pub fn inverse(&self) -> Word {
        Word {
            letters: self.letters.iter().rev().map(|l| l.inverted()).collect(),
        }
    }

    /// Free reduction to normal form: cancel adjacent g·g⁻¹ pairs until none
    /// remain. Idempotent; the result represents the same group element.
    pub fn free_reduce(&self) -> Word {
        let mut out: Vec<Letter> = Vec::with_capacity(self.letters.len());
        for &l in &self.letters {
            if let Some(&last) = out.last() {
                if last.cancels(l) {
                    out.pop();
                    continue;
                }
            }
            out.push(l);
        }
        Word { letters: out }
    }

    pub fn is_freely_reduced(&self) -> bool {
        self.letters.windows(2).all(|w| !w[0].cancels(w[1]))
    }

    /// Cyclic reduction of a freely reduced word: trim matched first/last
    /// letters. The result is the shortest word conjugate to the input
    /// reachable by trimming.
    pub fn cyclic_reduce(&self) -> Word {
        debug_assert!(self.is_freely_reduced());
        let mut letters = self.letters.clone();
        while letters.len() >= 2 {
            let first = letters[0];
            let last = *letters.last().unwrap();
            if first.cancels(last) {
                letters.pop();
                letters.remove(0);
            } else {
                break;
            }
        }
        Word { letters }
    }

    pub fn is_cyclically_reduced(&self) -> bool {
        if !self.is_freely_reduced() {
            return false;
        }
        match (self.letters.first(), self.letters.last()) {
            (Some(&f), Some(&l)) if self.letters.len() >= 2 => !f.cancels(l),
            _ => true,
        }
    }

    /// Signed exponent sum per generator.
    pub fn exponent_sums(&self, generator_count: usize) -> Vec<i64> {
        let mut sums = vec![0i64; generator_count];
        for l in &self.letters {
            sums[l.generator] += if l.inverse { -1 } else { 1 };
        }
        sums
    }

    pub fn max_generator(&self) -> Option<usize> {
        self.letters.iter().map(|l| l.generator).max()
    }

    /// Display against generator names, e.g. `a b^-1`.
    pub fn display(&self, names: &[String]) -> String {
        self.letters
            .iter()
            .map(|l| {
                if l.inverse {
                    format!("{}^-1", names[l.generator])
                } else {
                    names[l.generator].clone()
                }
            })
            .collect::<Vec<_>>()
            .join(" ")
    }
}

/// A finite presentation: named generators plus cyclically reduced relators.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Presentation {
    generator_names: Vec<String>,
    relators: Vec<Word>,
    total_relator_length: usize,
}

impl Presentation {
    /// Build a presentation; relators are freely and cyclically reduced on
    /// load. A relator reducing to the empty word is rejected (it would not
    /// attach a cellular 2-cell).
    pub fn new(generator_names: Vec<String>, relators: Vec<Word>) -> Result<Self> {
        if generator_names.is_empty() {
            return Err(Error::Input("a presentation needs at least one generator".into()));
        }
        let mut seen = std::collections::HashSet::new();
        for n in &generator_names {
            if !seen.insert(n.clone()) {
                return Err(Error::Input(format!("duplicate generator name `{n}`")));
            }
        }
        let gen_count = generator_names.len();
        let mut normalized = Vec::with_capacity(relators.len());
        for (i, r) in relators.into_iter().enumerate() {
            if let Some(g) = r.max_generator() {
                if g >= gen_count {
                    return Err(Error::Input(format!(
                        "relator {i} uses generator index {g} out of range"
                    )));
                }
            }
            let reduced = r.free_reduce().cyclic_reduce();
            if reduced.is_empty() {
                return Err(Error::Input(format!("relator {i} reduces to the empty word")));
            }
            normalized.push(reduced);
        }
        let total = normalized.iter().map(|r| r.len()).sum();
        Ok(Presentation {
            generator_names,
            relators: normalized,
            total_relator_length: total,
        })
    }

    pub fn generator_count(&self) -> usize {
        self.generator_names.len()
    }

    pub fn generator_names(&self) -> &[String] {
        &self.generator_names
    }

    pub fn relators(&self) -> &[Word] {
        &self.relators
    }

    /// Total relator length L (the §-style constant used in cut bounds).
    pub fn total_relator_length(&self) -> usize {
        self.total_relator_length
    }

    /// Parse the on-disk presentation format:
    /// line 1 `generators: a b c`, then lines `rel: a b a^-1 b^-1`.
    /// Blank lines and `#` comments are allowed. Unknown names are rejected
    /// with the offending line number.
    pub fn parse(text: &str) -> Result<Self> {
        let mut names: Option<Vec<String>> = None;
        let mut relators = Vec::new();
        for (lineno, raw) in text.lines().enumerate() {
            let line = raw.trim();
            let lineno = lineno + 1;
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            if let Some(rest) = line.strip_prefix("generators:") {
                if names.is_some() {
                    return Err(Error::Parse {
                        line: lineno,
                        message: "duplicate `generators:` line".into(),
                    });
                }
                let ns: Vec<String> = rest.split_whitespace().map(|s| s.to_string()).collect();
                if ns.is_empty() {
                    return Err(Error::Parse {
                        line: lineno,
                        message: "empty generator list".into(),
                    });
                }
                names = Some(ns);
            } else if let Some(rest) = line.strip_prefix("rel:") {
                let names = names.as_ref().ok_or(Error::Parse {
                    line: lineno,
                    message: "`rel:` before `generators:`".into(),
                })?;
                let mut letters = Vec::new();
                for tok in rest.split_whitespace() {
                    let (name, inverse) = match tok.strip_suffix("^-1") {
                        Some(base) => (base, true),
                        None => (tok, false),
                    };
                    let idx = names.iter().position(|n| n == name).ok_or(Error::Parse {
                        line: lineno,
                        message: format!("unknown generator `{name}`"),
                    })?;
                    letters.push(Letter::new(idx, inverse));
                }
                if letters.is_empty() {
                    return Err(Error::Parse {
                        line: lineno,
                        message: "empty relator".into(),
                    });
                }
                relators.push(Word::new(letters));
            } else {
                return Err(Error::Parse {
                    line: lineno,
                    message: format!("unrecognized line `{line}`"),
                });
            }
        }
        let names = names.ok_or(Error::Parse {
            line: 0,
            message: "missing `generators:` line".into(),
        })?;
        Presentation::new(names, relators)
    }
}

/// Trial-division primality check; p is small in every experiment.
pub fn is_prime(p: u32) -> bool {
    if p < 2 {
        return false;
    }
    let mut d = 2u32;
    while (d as u64) * (d as u64) <= p as u64 {
        if p % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

pub fn check_prime(p: u32) -> Result<()> {
    if is_prime(p) {
        Ok(())
    } else {
        Err(Error::NotPrime(p))
    }
}

/// Relator-by-generator exponent-sum matrix reduced mod p. The cokernel of
/// this matrix is H_1(G; F_p), so d_p(G) = generator_count - rank.
pub fn abelianized_mod_p(pres: &Presentation, p: u32) -> Result<MatrixFp> {
    check_prime(p)?;
    let g = pres.generator_count();
    let rows: Vec<Vec<u32>> = pres
        .relators()
        .iter()
        .map(|r| {
            r.exponent_sums(g)
                .into_iter()
                .map(|s| (s.rem_euclid(p as i64)) as u32)
                .collect()
        })
        .collect();
    MatrixFp::from_rows(p, g, &rows)
}

/// d_p(G) = dim H_1(G; F_p).
pub fn dp(pres: &Presentation, p: u32) -> Result<usize> {
    let m = abelianized_mod_p(pres, p)?;
    Ok(pres.generator_count() - m.rank())
}

/// A finite quotient given by one permutation of {0..degree-1} per
/// generator; subgroups arise as point stabilizers of the action.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FiniteQuotientSpec {
    degree: usize,
    images: Vec<Vec<usize>>,
}

impl FiniteQuotientSpec {
    /// Validates that each image is a bijection and that every relator,
    /// traced from every point, returns to its start.
    pub fn new(pres: &Presentation, degree: usize, images: Vec<Vec<usize>>) -> Result<Self> {
        if degree == 0 {
            return Err(Error::Input("quotient degree must be positive".into()));
        }
        if images.len() != pres.generator_count() {
            return Err(Error::Input(format!(
                "expected {} permutations, got {}",
                pres.generator_count(),
                images.len()
            )));
        }
        for (g, perm) in images.iter().enumerate() {
            if perm.len() != degree {
                return Err(Error::Input(format!(
                    "permutation for generator {g} has length {}, expected {degree}",
                    perm.len()
                )));
            }
            let mut seen = vec![false; degree];
            for &img in perm {
                if img >= degree || seen[img] {
                    return Err(Error::Input(format!(
                        "image of generator {g} is not a bijection"
                    )));
                }
                seen[img] = true;
            }
        }
        let spec = FiniteQuotientSpec { degree, images };
        for (i, r) in pres.relators().iter().enumerate() {
            for start in 0..degree {
                if spec.trace(start, r) != start {
                    return Err(Error::Input(format!(
                        "relator {i} does not act trivially: point {start} moves"
                    )));
                }
            }
        }
        Ok(spec)
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn images(&self) -> &[Vec<usize>] {
        &self.images
    }

    pub fn apply(&self, point: usize, l: Letter) -> usize {
        if l.inverse {
            // inverse permutation lookup
            self.images[l.generator]
                .iter()
                .position(|&x| x == point)
                .expect("bijection")
        } else {
            self.images[l.generator][point]
        }
    }

    pub fn trace(&self, start: usize, w: &Word) -> usize {
        w.letters().iter().fold(start, |pt, &l| self.apply(pt, l))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::util::SplitMix64;
    use proptest::prelude::*;

    fn w(pairs: &[(usize, i32)]) -> Word {
        Word::from_signed(pairs)
    }

    /// Naive fixpoint oracle: cancel one adjacent pair at a time until none.
    fn reduce_by_single_cancellation(word: &Word) -> Word {
        let mut letters = word.letters().to_vec();
        loop {
            let mut cancelled = false;
            for i in 0..letters.len().saturating_sub(1) {
                if letters[i].cancels(letters[i + 1]) {
                    letters.drain(i..=i + 1);
                    cancelled = true;
                    break;
                }
            }
            if !cancelled {
                return Word::new(letters);
            }
        }
    }

    #[test]
    fn free_reduce_examples() {
        assert_eq!(w(&[(0, 1), (0, -1)]).free_reduce(), Word::empty());
        assert_eq!(
            w(&[(0, 1), (1, 1), (1, -1), (0, 1)]).free_reduce(),
            w(&[(0, 1), (0, 1)])
        );
    }

    #[test]
    fn free_reduce_matches_fixpoint_oracle_on_random_words() {
        let mut rng = SplitMix64::new(9);
        for _ in 0..20 {
            let pairs: Vec<(usize, i32)> = (0..40)
                .map(|_| {
                    let g = rng.below(3) as usize;
                    let s = if rng.below(2) == 0 { 1 } else { -1 };
                    (g, s)
                })
                .collect();
            let word = w(&pairs);
            assert_eq!(word.free_reduce(), reduce_by_single_cancellation(&word));
        }
    }

    #[test]
    fn cyclic_reduce_examples() {
        // a b a^-1 -> b
        assert_eq!(w(&[(0, 1), (1, 1), (0, -1)]).cyclic_reduce(), w(&[(1, 1)]));
        // commutator already cyclically reduced
        let comm = w(&[(0, 1), (1, 1), (0, -1), (1, -1)]);
        assert_eq!(comm.cyclic_reduce(), comm);
        // a a b a^-1 a^-1 -> b, and no rotation is shorter
        let trimmed = w(&[(0, 1), (0, 1), (1, 1), (0, -1), (0, -1)]).cyclic_reduce();
        assert_eq!(trimmed, w(&[(1, 1)]));
        for rot in 0..5 {
            let mut letters = w(&[(0, 1), (0, 1), (1, 1), (0, -1), (0, -1)]).letters().to_vec();
            letters.rotate_left(rot);
            let rotated = Word::new(letters).free_reduce().cyclic_reduce();
            assert!(rotated.len() >= trimmed.len());
        }
    }

    #[test]
    fn abelianized_examples() {
        let free2 = Presentation::new(vec!["a".into(), "b".into()], vec![]).unwrap();
        let m = abelianized_mod_p(&free2, 2).unwrap();
        assert_eq!((m.rows(), m.cols()), (0, 2));
        assert_eq!(dp(&free2, 2).unwrap(), 2);

        let torus = Presentation::new(
            vec!["a".into(), "b".into()],
            vec![w(&[(0, 1), (1, 1), (0, -1), (1, -1)])],
        )
        .unwrap();
        let m = abelianized_mod_p(&torus, 3).unwrap();
        assert_eq!(m.row(0), &[0, 0]);
        assert_eq!(dp(&torus, 3).unwrap(), 2);

        let z5 = Presentation::new(vec!["a".into()], vec![w(&[(0, 1); 5])]).unwrap();
        assert_eq!(abelianized_mod_p(&z5, 5).unwrap().row(0), &[0]);
        assert_eq!(dp(&z5, 5).unwrap(), 1);
        assert_eq!(abelianized_mod_p(&z5, 2).unwrap().row(0), &[1]);
        assert_eq!(dp(&z5, 2).unwrap(), 0);
    }

    #[test]
    fn dp_invariant_under_relator_rotation_and_inversion() {
        let base = w(&[(0, 1), (1, 1), (0, -1), (1, -1), (0, 1)]);
        let reference = {
            let pres =
                Presentation::new(vec!["a".into(), "b".into()], vec![base.clone()]).unwrap();
            dp(&pres, 3).unwrap()
        };
        for rot in 0..base.len() {
            let mut letters = base.letters().to_vec();
            letters.rotate_left(rot);
            let pres =
                Presentation::new(vec!["a".into(), "b".into()], vec![Word::new(letters)]).unwrap();
            assert_eq!(dp(&pres, 3).unwrap(), reference);
        }
        let pres =
            Presentation::new(vec!["a".into(), "b".into()], vec![base.inverse()]).unwrap();
        assert_eq!(dp(&pres, 3).unwrap(), reference);
    }

    #[test]
    fn parse_round_trip_and_errors() {
        let text = "generators: a b\nrel: a b a^-1 b^-1\n";
        let pres = Presentation::parse(text).unwrap();
        assert_eq!(pres.generator_count(), 2);
        assert_eq!(pres.relators().len(), 1);
        assert_eq!(pres.total_relator_length(), 4);

        let bad = Presentation::parse("generators: a\nrel: a c\n");
        match bad {
            Err(Error::Parse { line, .. }) => assert_eq!(line, 2),
            other => panic!("expected parse error, got {other:?}"),
        }
    }

    #[test]
    fn quotient_spec_validation() {
        let free = Presentation::new(vec!["a".into(), "b".into()], vec![]).unwrap();
        // Z/4 via a -> +1, b -> 0
        let spec =
            FiniteQuotientSpec::new(&free, 4, vec![vec![1, 2, 3, 0], vec![0, 1, 2, 3]]).unwrap();
        assert_eq!(spec.trace(0, &w(&[(0, 1), (0, 1)])), 2);

        let z2 = Presentation::new(vec!["a".into()], vec![w(&[(0, 1), (0, 1)])]).unwrap();
        // a -> 3-cycle does not kill a^2
        assert!(FiniteQuotientSpec::new(&z2, 3, vec![vec![1, 2, 0]]).is_err());
    }

    proptest! {
        #[test]
        fn free_reduce_is_idempotent(pairs in proptest::collection::vec((0usize..4, prop_oneof![Just(1i32), Just(-1i32)]), 0..60)) {
            let word = Word::from_signed(&pairs);
            let once = word.free_reduce();
            prop_assert_eq!(once.free_reduce(), once.clone());
            prop_assert!(once.is_freely_reduced());
        }

        #[test]
        fn dp_bounded_by_generator_count(seed in 0u64..500, p in prop_oneof![Just(2u32), Just(3u32), Just(5u32)]) {
            let mut rng = SplitMix64::new(seed);
            let gens = 1 + rng.below(3) as usize;
            let names: Vec<String> = (0..gens).map(|i| format!("g{i}")).collect();
            let mut relators = Vec::new();
            for _ in 0..rng.below(3) {
                let len = 1 + rng.below(6) as usize;
                let pairs: Vec<(usize, i32)> = (0..len)
                    .map(|_| (rng.below(gens as u64) as usize, if rng.below(2) == 0 { 1 } else { -1 }))
                    .collect();
                let word = Word::from_signed(&pairs).free_reduce().cyclic_reduce();
                if !word.is_empty() {
                    relators.push(word);
                }
            }
            let pres = Presentation::new(names, relators).unwrap();
            let d = dp(&pres, p).unwrap();
            prop_assert!(d <= pres.generator_count());
        }
    }
}
