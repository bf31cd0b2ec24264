//! Subnormal p-power subgroup enumeration and growth statistics: the
//! level-by-level kernel BFS with canonical-form dedup, the count ledger
//! with its refinement inequality, the homology gradient, and the
//! growth-vs-homology diagnostics.

use std::collections::BTreeMap;
use std::sync::Arc;

use num_rational::Ratio;
use serde::{Deserialize, Serialize};

use crate::cosets::{index_p_normal_subgroups, subgroup_dp, CosetTable, SubnormalChain};
use crate::util::prime_power_u128;
use crate::words::{check_prime, Presentation};
use crate::{Error, Result};

/// Per-level counts: a_{p^n} (subnormal subgroups of index exactly p^n
/// reached by nested normal index-p steps) and r_n (max d_p over the level).
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LevelStats {
    pub level: usize,
    pub index: u64,
    pub count: u64,
    pub max_dp: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GrowthLedger {
    pub p: u32,
    pub levels: Vec<LevelStats>,
    /// Set when a budget stopped the enumeration early.
    pub truncated: Option<String>,
}

impl GrowthLedger {
    /// The refinement inequality a_{p^n} ≤ a_{p^{n−1}}·p^{r_{n−1}} at every
    /// computed level, plus a_{p^0} = 1.
    pub fn verify_inequalities(&self) -> Result<()> {
        if self.levels.first().map(|l| l.count) != Some(1) {
            return Err(Error::VerificationFailure("a_{p^0} must be 1".into()));
        }
        for w in self.levels.windows(2) {
            let bound = (w[0].count as u128)
                .checked_mul(prime_power_u128(self.p, w[0].max_dp as u32)?)
                .ok_or(Error::Overflow("ledger bound"))?;
            if (w[1].count as u128) > bound {
                return Err(Error::VerificationFailure(format!(
                    "ledger inequality fails at level {}: {} > {}",
                    w[1].level, w[1].count, bound
                )));
            }
        }
        Ok(())
    }
}

/// One enumerated subgroup in the DAG.
#[derive(Clone, Debug)]
pub struct DagNode {
    pub level: usize,
    pub canonical: String,
    pub dp: usize,
    pub index: usize,
    /// First parent discovered (for chain extraction).
    pub parent: Option<usize>,
}

/// The level-by-level subgroup DAG: nodes carry tables, edges record every
/// (parent, kernel) incidence including rediscoveries of a deduped child.
#[derive(Clone, Debug)]
pub struct SubgroupDag {
    pub nodes: Vec<DagNode>,
    pub tables: Vec<CosetTable>,
    pub edges: Vec<(usize, usize)>,
}

impl SubgroupDag {
    /// The maximal-gradient path: walk parents up from the deepest node
    /// with the largest d_p (ties by canonical form).
    pub fn max_gradient_path(&self) -> Vec<CosetTable> {
        let deepest = self.nodes.iter().map(|n| n.level).max().unwrap_or(0);
        let mut best: Option<usize> = None;
        for (i, n) in self.nodes.iter().enumerate() {
            if n.level != deepest {
                continue;
            }
            best = Some(match best {
                None => i,
                Some(j) => {
                    let a = &self.nodes[i];
                    let b = &self.nodes[j];
                    if (b.dp, &a.canonical) < (a.dp, &b.canonical) {
                        i
                    } else {
                        j
                    }
                }
            });
        }
        let mut path = Vec::new();
        let mut cur = best;
        while let Some(i) = cur {
            path.push(self.tables[i].clone());
            cur = self.nodes[i].parent;
        }
        path.reverse();
        path
    }
}

/// Level-by-level BFS: level 0 is G; level n dedups (by canonical form) the
/// kernels of all H → Z/pZ over every level-(n−1) subgroup H. The coset
/// budget caps the child table size; exceeding it returns the partial
/// ledger with an explicit truncation marker.
pub fn enumerate_subnormal(
    pres: &Arc<Presentation>,
    p: u32,
    max_level: usize,
    max_cosets: usize,
) -> Result<(GrowthLedger, SubgroupDag)> {
    check_prime(p)?;
    let top = CosetTable::trivial(Arc::clone(pres));
    let dp0 = subgroup_dp(&top, p)?;
    let mut dag = SubgroupDag {
        nodes: vec![DagNode {
            level: 0,
            canonical: top.canonical_form(),
            dp: dp0,
            index: 1,
            parent: None,
        }],
        tables: vec![top],
        edges: Vec::new(),
    };
    let mut ledger = GrowthLedger {
        p,
        levels: vec![LevelStats { level: 0, index: 1, count: 1, max_dp: dp0 }],
        truncated: None,
    };
    let mut frontier: Vec<usize> = vec![0];
    for level in 1..=max_level {
        let child_index = match (p as u64).checked_pow(level as u32) {
            Some(i) if i as usize <= max_cosets => i,
            _ => {
                ledger.truncated = Some(format!(
                    "level {level} needs index {}^{level} > coset budget {max_cosets}",
                    p
                ));
                break;
            }
        };
        let mut seen: BTreeMap<String, usize> = BTreeMap::new();
        let mut next_frontier = Vec::new();
        let mut max_dp = 0usize;
        for &parent_id in &frontier {
            let children = index_p_normal_subgroups(&dag.tables[parent_id], p)?;
            for child in children {
                let canonical = child.canonical_form();
                let node_id = match seen.get(&canonical) {
                    Some(&id) => id,
                    None => {
                        let dp = subgroup_dp(&child, p)?;
                        max_dp = max_dp.max(dp);
                        let id = dag.nodes.len();
                        dag.nodes.push(DagNode {
                            level,
                            canonical: canonical.clone(),
                            dp,
                            index: child.index(),
                            parent: Some(parent_id),
                        });
                        dag.tables.push(child);
                        seen.insert(canonical, id);
                        next_frontier.push(id);
                        id
                    }
                };
                dag.edges.push((parent_id, node_id));
            }
        }
        ledger.levels.push(LevelStats {
            level,
            index: child_index,
            count: next_frontier.len() as u64,
            max_dp,
        });
        frontier = next_frontier;
        if frontier.is_empty() {
            break;
        }
    }
    Ok((ledger, dag))
}

/// Both gradient normalizations along a chain, with the non-increasing
/// check on (d_p − 1)/index.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GradientReport {
    /// (d_p(G_i) − 1)/[G:G_i]
    pub gradient: Vec<Ratio<i64>>,
    /// d_p(G_i)/[G:G_i]
    pub dp_over_index: Vec<Ratio<i64>>,
    pub infimum: Ratio<i64>,
    pub non_increasing: bool,
}

pub fn gradient(chain: &SubnormalChain) -> Result<GradientReport> {
    chain.validate()?;
    let mut g = Vec::new();
    let mut plain = Vec::new();
    for t in &chain.tables {
        let dp = subgroup_dp(t, chain.p)?;
        g.push(Ratio::new(dp as i64 - 1, t.index() as i64));
        plain.push(Ratio::new(dp as i64, t.index() as i64));
    }
    let infimum = g.iter().copied().min().unwrap_or_else(|| Ratio::from_integer(0));
    let non_increasing = g.windows(2).all(|w| w[1] <= w[0]);
    Ok(GradientReport { gradient: g, dp_over_index: plain, infimum, non_increasing })
}

/// Finite growth-vs-homology diagnostics: the (log a)/p^n and (Σr)/p^n
/// sequences, the chain-driven lower-bound witness, and the refinement
/// upper bound. No asymptotic verdict.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Thm81Report {
    /// ln(a_{p^n})/p^n, approximate by nature (marked float).
    pub log_count_over_pn_float: Vec<f64>,
    /// (Σ_{i<n} r_i)/p^n as exact rationals.
    pub sum_r_over_pn: Vec<Ratio<i64>>,
    /// Per level n ≥ 1: count ≥ (p^{d_p(chain level n−1)} − 1)/(p − 1).
    pub lower_witness: Option<Vec<LowerWitnessRow>>,
    /// Per level n ≥ 1: count ≤ p^{Σ_{i<n} r_i}.
    pub upper_rows: Vec<UpperBoundRow>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct LowerWitnessRow {
    pub level: usize,
    /// (p^{d_p} − 1)/(p − 1), serialized as a string (can exceed u64)
    pub bound: String,
    pub actual: u64,
    pub holds: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct UpperBoundRow {
    pub level: usize,
    pub exponent_sum: usize,
    pub holds: bool,
}

pub fn thm81_diagnostics(
    ledger: &GrowthLedger,
    chain: Option<&SubnormalChain>,
) -> Result<Thm81Report> {
    if ledger.levels.len() < 2 {
        return Err(Error::Input("thm81 diagnostics need at least 2 levels".into()));
    }
    let p = ledger.p;
    let log_count_over_pn_float = ledger
        .levels
        .iter()
        .map(|l| (l.count as f64).ln() / l.index as f64)
        .collect();
    let mut sum_r_over_pn = Vec::new();
    let mut prefix = 0usize;
    for l in &ledger.levels {
        sum_r_over_pn.push(Ratio::new(prefix as i64, l.index as i64));
        prefix += l.max_dp;
    }
    let mut upper_rows = Vec::new();
    let mut prefix = 0u32;
    for l in &ledger.levels {
        if l.level > 0 {
            let bound = prime_power_u128(p, prefix)?;
            upper_rows.push(UpperBoundRow {
                level: l.level,
                exponent_sum: prefix as usize,
                holds: (l.count as u128) <= bound,
            });
        }
        prefix += l.max_dp as u32;
    }
    let lower_witness = match chain {
        None => None,
        Some(chain) => {
            chain.validate()?;
            let mut rows = Vec::new();
            for (n, l) in ledger.levels.iter().enumerate().skip(1) {
                let Some(prev_table) = chain.tables.get(n - 1) else { break };
                if prev_table.index() as u64 * p as u64 != l.index {
                    return Err(Error::Input(
                        "chain levels do not refine by single index-p steps".into(),
                    ));
                }
                let dp = subgroup_dp(prev_table, p)?;
                let bound =
                    (prime_power_u128(p, dp as u32)? - 1) / (p as u128 - 1);
                rows.push(LowerWitnessRow {
                    level: l.level,
                    bound: bound.to_string(),
                    actual: l.count,
                    holds: l.count as u128 >= bound,
                });
            }
            Some(rows)
        }
    };
    Ok(Thm81Report { log_count_over_pn_float, sum_r_over_pn, lower_witness, upper_rows })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cosets::{from_quotient, is_normal_in, is_subgroup_of};
    use crate::words::{FiniteQuotientSpec, Word};

    fn pres(names: &[&str], relators: &[&[(usize, i32)]]) -> Arc<Presentation> {
        Arc::new(
            Presentation::new(
                names.iter().map(|s| s.to_string()).collect(),
                relators.iter().map(|r| Word::from_signed(r)).collect(),
            )
            .unwrap(),
        )
    }

    #[test]
    fn z_has_one_subgroup_per_level() {
        let z = pres(&["a"], &[]);
        let (ledger, _) = enumerate_subnormal(&z, 2, 3, 100000).unwrap();
        let counts: Vec<u64> = ledger.levels.iter().map(|l| l.count).collect();
        assert_eq!(counts, vec![1, 1, 1, 1]);
        ledger.verify_inequalities().unwrap();
    }

    #[test]
    fn f2_level_counts_and_oracle() {
        let f2 = pres(&["a", "b"], &[]);
        let (ledger, dag) = enumerate_subnormal(&f2, 2, 2, 100000).unwrap();
        assert_eq!(ledger.levels[1].count, 3);
        assert_eq!(ledger.levels[1].max_dp, 3);
        ledger.verify_inequalities().unwrap();

        // every level-2 node is a subgroup of and normal in some level-1
        // parent, with index exactly 4
        let level1: Vec<usize> = (0..dag.nodes.len()).filter(|&i| dag.nodes[i].level == 1).collect();
        for i in 0..dag.nodes.len() {
            if dag.nodes[i].level != 2 {
                continue;
            }
            assert_eq!(dag.tables[i].index(), 4);
            let ok = level1.iter().any(|&j| {
                is_subgroup_of(&dag.tables[i], &dag.tables[j]).unwrap()
                    && is_normal_in(&dag.tables[i], &dag.tables[j]).unwrap()
            });
            assert!(ok);
        }

        // independent oracle: enumerate all transitive actions of F2 on
        // {0..3}, take point stabilizers, keep those normal in some
        // index-2 subgroup, count distinct canonical forms
        let mut oracle = std::collections::BTreeSet::new();
        let perms4 = all_permutations(4);
        for pa in &perms4 {
            for pb in &perms4 {
                let Ok(spec) =
                    FiniteQuotientSpec::new(&f2, 4, vec![pa.clone(), pb.clone()])
                else {
                    continue;
                };
                let Ok(t) = from_quotient(&f2, &spec, 0) else { continue };
                if t.index() != 4 {
                    continue;
                }
                let subnormal = level1.iter().any(|&j| {
                    is_subgroup_of(&t, &dag.tables[j]).unwrap()
                        && is_normal_in(&t, &dag.tables[j]).unwrap()
                });
                if subnormal {
                    oracle.insert(t.canonical_form());
                }
            }
        }
        assert_eq!(ledger.levels[2].count, oracle.len() as u64);
    }

    fn all_permutations(n: usize) -> Vec<Vec<usize>> {
        let mut out = Vec::new();
        let mut items: Vec<usize> = (0..n).collect();
        permute(&mut items, 0, &mut out);
        out
    }

    fn permute(items: &mut Vec<usize>, k: usize, out: &mut Vec<Vec<usize>>) {
        if k == items.len() {
            out.push(items.clone());
            return;
        }
        for i in k..items.len() {
            items.swap(k, i);
            permute(items, k + 1, out);
            items.swap(k, i);
        }
    }

    #[test]
    fn z2_level1_count_p3() {
        let z2 = pres(&["a", "b"], &[&[(0, 1), (1, 1), (0, -1), (1, -1)]]);
        let (ledger, dag) = enumerate_subnormal(&z2, 3, 2, 100000).unwrap();
        assert_eq!(ledger.levels[1].count, 4); // (3^2 − 1)/2
        for i in 0..dag.nodes.len() {
            if dag.nodes[i].level == 2 {
                assert_eq!(dag.nodes[i].dp, 2); // subgroups of Z^2 are Z^2
            }
        }
    }

    #[test]
    fn gradient_along_f2_chain() {
        let f2 = pres(&["a", "b"], &[]);
        let (_, dag) = enumerate_subnormal(&f2, 2, 3, 100000).unwrap();
        let path = dag.max_gradient_path();
        assert_eq!(path.len(), 4);
        let chain = SubnormalChain::new(2, path).unwrap();
        let g = gradient(&chain).unwrap();
        assert!(g.non_increasing);
        // free group kernels: (d_p − 1)/index ≡ 1
        for v in &g.gradient {
            assert_eq!(*v, Ratio::from_integer(1));
        }
    }

    #[test]
    fn thm81_bounds_on_f2() {
        let f2 = pres(&["a", "b"], &[]);
        let (ledger, dag) = enumerate_subnormal(&f2, 2, 2, 100000).unwrap();
        let chain = SubnormalChain::new(2, dag.max_gradient_path()).unwrap();
        let report = thm81_diagnostics(&ledger, Some(&chain)).unwrap();
        let rows = report.lower_witness.unwrap();
        // level 1: bound (2^2 − 1)/1 = 3, actual 3
        assert_eq!(rows[0].bound, "3");
        assert_eq!(rows[0].actual, 3);
        assert!(rows[0].holds);
        for r in &rows {
            assert!(r.holds);
        }
        for r in &report.upper_rows {
            assert!(r.holds);
        }
    }

    #[test]
    fn truncation_marker() {
        let f2 = pres(&["a", "b"], &[]);
        let (ledger, _) = enumerate_subnormal(&f2, 2, 5, 8).unwrap();
        assert!(ledger.truncated.is_some());
        assert!(ledger.levels.len() < 6);
    }
}
