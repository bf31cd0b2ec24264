//! Small shared machinery: union-find, a deterministic RNG for sampled
//! search, and rational helpers.

use num_rational::Ratio;

/// Union-find with path compression and union by size.
#[derive(Clone, Debug)]
pub struct UnionFind {
    parent: Vec<usize>,
    size: Vec<usize>,
    components: usize,
}

impl UnionFind {
    pub fn new(n: usize) -> Self {
        UnionFind {
            parent: (0..n).collect(),
            size: vec![1; n],
            components: n,
        }
    }

    pub fn find(&mut self, x: usize) -> usize {
        let mut root = x;
        while self.parent[root] != root {
            root = self.parent[root];
        }
        let mut cur = x;
        while self.parent[cur] != root {
            let next = self.parent[cur];
            self.parent[cur] = root;
            cur = next;
        }
        root
    }

    pub fn union(&mut self, a: usize, b: usize) -> bool {
        let (mut ra, mut rb) = (self.find(a), self.find(b));
        if ra == rb {
            return false;
        }
        if self.size[ra] < self.size[rb] {
            std::mem::swap(&mut ra, &mut rb);
        }
        self.parent[rb] = ra;
        self.size[ra] += self.size[rb];
        self.components -= 1;
        true
    }

    pub fn same(&mut self, a: usize, b: usize) -> bool {
        self.find(a) == self.find(b)
    }

    pub fn component_count(&self) -> usize {
        self.components
    }

    /// Component ids numbered 0.. in order of first appearance of each root.
    pub fn component_ids(&mut self) -> Vec<usize> {
        let n = self.parent.len();
        let mut ids = vec![usize::MAX; n];
        let mut next = 0;
        let mut out = Vec::with_capacity(n);
        for x in 0..n {
            let r = self.find(x);
            if ids[r] == usize::MAX {
                ids[r] = next;
                next += 1;
            }
            out.push(ids[r]);
        }
        out
    }
}

/// SplitMix64: deterministic, seedable, good enough for sampled upper bounds.
/// Reports must be byte-identical across runs and thread counts, so all
/// sampling in the library goes through fixed-seed instances of this.
#[derive(Clone, Debug)]
pub struct SplitMix64 {
    state: u64,
}

impl SplitMix64 {
    pub fn new(seed: u64) -> Self {
        SplitMix64 { state: seed }
    }

    pub fn next_u64(&mut self) -> u64 {
        self.state = self.state.wrapping_add(0x9e3779b97f4a7c15);
        let mut z = self.state;
        z = (z ^ (z >> 30)).wrapping_mul(0xbf58476d1ce4e5b9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94d049bb133111eb);
        z ^ (z >> 31)
    }

    /// Uniform in [0, bound). bound must be nonzero.
    pub fn below(&mut self, bound: u64) -> u64 {
        // Modulo bias is irrelevant for the sampling this drives.
        self.next_u64() % bound
    }
}

/// Exact rational from a (numerator, denominator) pair of counts.
pub fn ratio(num: i64, den: i64) -> Ratio<i64> {
    Ratio::new(num, den)
}

/// p^e as an exact rational, for signed exponents (desk-scale magnitudes).
pub fn prime_power_ratio(p: u32, exponent: i64) -> crate::Result<Ratio<i64>> {
    let mag = exponent.unsigned_abs() as u32;
    let pw = (p as i64)
        .checked_pow(mag)
        .ok_or(crate::Error::Overflow("prime power"))?;
    Ok(if exponent >= 0 {
        Ratio::from_integer(pw)
    } else {
        Ratio::new(1, pw)
    })
}

/// p^e exactly in a u128, used by growth-ledger bounds.
pub fn prime_power_u128(p: u32, exponent: u32) -> crate::Result<u128> {
    (p as u128)
        .checked_pow(exponent)
        .ok_or(crate::Error::Overflow("prime power"))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn union_find_components() {
        let mut uf = UnionFind::new(5);
        uf.union(0, 1);
        uf.union(3, 4);
        assert_eq!(uf.component_count(), 3);
        assert!(uf.same(0, 1));
        assert!(!uf.same(1, 2));
        let ids = uf.component_ids();
        assert_eq!(ids[0], ids[1]);
        assert_ne!(ids[0], ids[2]);
    }

    #[test]
    fn splitmix_is_deterministic() {
        let mut a = SplitMix64::new(7);
        let mut b = SplitMix64::new(7);
        for _ in 0..100 {
            assert_eq!(a.next_u64(), b.next_u64());
        }
    }

    #[test]
    fn prime_powers() {
        assert_eq!(prime_power_ratio(2, 3).unwrap(), ratio(8, 1));
        assert_eq!(prime_power_ratio(3, -2).unwrap(), ratio(1, 9));
        assert_eq!(prime_power_u128(2, 10).unwrap(), 1024);
    }
}
