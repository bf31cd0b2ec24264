//! Cheeger constants of Schreier graphs, exact and bracketed; the
//! structured minimizer exhibited at strict Cheeger decreases; Property (τ)
//! diagnostics along chains. The exact side is plain subset enumeration
//! (∂A never counts loops, parallel edges count with multiplicity); the
//! spectral side is advisory and clearly marked.

use nalgebra::DMatrix;
use num_rational::Ratio;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::cosets::{schreier_graph, SchreierGraph, SubnormalChain};
use crate::util::UnionFind;
use crate::{Error, Result};

/// Exact value or spectral bracket.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub enum CheegerMethod {
    Exact,
    Bounds { lambda1: f64, spectral_lower: f64, spectral_upper: f64 },
}

/// h(X) with a witness set achieving it (exact mode) or the best sweep cut
/// (bounds mode, where `value` is still the witness's exact ratio).
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CheegerResult {
    pub value: Ratio<i64>,
    pub witness: Vec<usize>,
    pub method: CheegerMethod,
}

#[derive(Clone, Copy, Debug)]
struct Cand {
    boundary: u64,
    size: u64,
    mask: u64,
}

fn mask_lex_less(a: u64, b: u64) -> bool {
    // lexicographic order on the sorted vertex lists
    let (mut a, mut b) = (a, b);
    while a != 0 && b != 0 {
        let (ta, tb) = (a.trailing_zeros(), b.trailing_zeros());
        if ta != tb {
            return ta < tb;
        }
        a &= a - 1;
        b &= b - 1;
    }
    a == 0 && b != 0
}

fn better(a: Cand, b: Cand) -> Cand {
    let left = (a.boundary as u128) * (b.size as u128);
    let right = (b.boundary as u128) * (a.size as u128);
    if left != right {
        return if left < right { a } else { b };
    }
    if a.size != b.size {
        return if a.size < b.size { a } else { b };
    }
    if mask_lex_less(a.mask, b.mask) {
        a
    } else {
        b
    }
}

fn boundary_of_mask(edges: &[(usize, usize)], mask: u64) -> u64 {
    let mut count = 0u64;
    for &(u, v) in edges {
        if ((mask >> u) ^ (mask >> v)) & 1 == 1 {
            count += 1;
        }
    }
    count
}

fn mask_to_set(mask: u64) -> Vec<usize> {
    let mut v = Vec::new();
    let mut m = mask;
    while m != 0 {
        v.push(m.trailing_zeros() as usize);
        m &= m - 1;
    }
    v
}

/// Exact Cheeger constant by enumeration of all non-empty vertex sets with
/// |A| ≤ |V|/2. Ties broken by smallest |A|, then lexicographic vertex set.
/// When `symmetry` supplies graph automorphisms, only orbit representatives
/// are scanned.
pub fn cheeger_exact(
    x: &SchreierGraph,
    max_vertices: usize,
    symmetry: Option<&[Vec<usize>]>,
) -> Result<CheegerResult> {
    let n = x.vertex_count;
    if n < 2 {
        return Err(Error::Input(
            "cheeger constant needs at least two vertices".into(),
        ));
    }
    if n > max_vertices || n > 63 {
        return Err(Error::BudgetExceeded {
            stage: "cheeger_exact",
            detail: format!("{n} vertices exceeds the exact-search cap of {max_vertices}"),
        });
    }
    let edges: Vec<(usize, usize)> = x
        .edges
        .iter()
        .filter(|&&(u, v, _)| u != v)
        .map(|&(u, v, _)| (u, v))
        .collect();
    let half = (n / 2) as u32;
    let total: u64 = 1u64 << n;
    let chunk = 1u64 << n.saturating_sub(6).min(16);
    let ranges: Vec<(u64, u64)> = (1..total)
        .step_by(chunk as usize)
        .map(|start| (start, (start + chunk).min(total)))
        .collect();
    let best = ranges
        .into_par_iter()
        .map(|(lo, hi)| {
            let mut local: Option<Cand> = None;
            'mask: for mask in lo..hi {
                if mask.count_ones() > half {
                    continue;
                }
                if let Some(perms) = symmetry {
                    for perm in perms {
                        let mut image = 0u64;
                        let mut m = mask;
                        while m != 0 {
                            let v = m.trailing_zeros() as usize;
                            image |= 1u64 << perm[v];
                            m &= m - 1;
                        }
                        if image < mask {
                            continue 'mask;
                        }
                    }
                }
                let cand = Cand {
                    boundary: boundary_of_mask(&edges, mask),
                    size: mask.count_ones() as u64,
                    mask,
                };
                local = Some(match local {
                    None => cand,
                    Some(b) => better(cand, b),
                });
            }
            local
        })
        .reduce(
            || None,
            |a, b| match (a, b) {
                (None, x) | (x, None) => x,
                (Some(a), Some(b)) => Some(better(a, b)),
            },
        )
        .ok_or_else(|| Error::Input("no admissible subset".into()))?;
    Ok(CheegerResult {
        value: Ratio::new(best.boundary as i64, best.size as i64),
        witness: mask_to_set(best.mask),
        method: CheegerMethod::Exact,
    })
}

/// Spectral bracket λ₁/2 ≤ h ≤ √(2kλ₁) for the k-regular multigraph, plus
/// the best Fiedler-vector sweep cut as witness. The bracket endpoints are
/// floating point (tolerance 1e-9, inflated by 1e-6); the witness value is
/// exact.
pub fn cheeger_bounds(x: &SchreierGraph) -> Result<CheegerResult> {
    let n = x.vertex_count;
    if n < 2 {
        return Err(Error::Input(
            "cheeger constant needs at least two vertices".into(),
        ));
    }
    // disconnected graphs short-circuit: h = 0 with a component witness
    let mut uf = UnionFind::new(n);
    for &(u, v, _) in &x.edges {
        uf.union(u, v);
    }
    if uf.component_count() > 1 {
        let ids = uf.component_ids();
        let count = ids.iter().copied().max().unwrap() + 1;
        let mut members: Vec<Vec<usize>> = vec![Vec::new(); count];
        for (v, &id) in ids.iter().enumerate() {
            members[id].push(v);
        }
        members.sort_by(|a, b| a.len().cmp(&b.len()).then_with(|| a.cmp(b)));
        return Ok(CheegerResult {
            value: Ratio::from_integer(0),
            witness: members[0].clone(),
            method: CheegerMethod::Bounds {
                lambda1: 0.0,
                spectral_lower: 0.0,
                spectral_upper: 0.0,
            },
        });
    }

    let mut lap = DMatrix::<f64>::zeros(n, n);
    for &(u, v, _) in &x.edges {
        if u == v {
            continue;
        }
        lap[(u, u)] += 1.0;
        lap[(v, v)] += 1.0;
        lap[(u, v)] -= 1.0;
        lap[(v, u)] -= 1.0;
    }
    let eig = lap.clone().symmetric_eigen();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| eig.eigenvalues[i].partial_cmp(&eig.eigenvalues[j]).unwrap());
    let lambda1 = eig.eigenvalues[order[1]].max(0.0);
    let fiedler: Vec<f64> = (0..n).map(|v| eig.eigenvectors[(v, order[1])]).collect();

    let degrees = x.degrees();
    let k = *degrees.iter().max().unwrap() as f64;

    let edges: Vec<(usize, usize)> = x
        .edges
        .iter()
        .filter(|&&(u, v, _)| u != v)
        .map(|&(u, v, _)| (u, v))
        .collect();
    let mut by_value: Vec<usize> = (0..n).collect();
    by_value.sort_by(|&i, &j| {
        fiedler[i].partial_cmp(&fiedler[j]).unwrap().then(i.cmp(&j))
    });
    let mut best: Option<Cand> = None;
    for ordered in [by_value.clone(), by_value.iter().rev().copied().collect()] {
        let mut mask = 0u64;
        for (count, &v) in ordered.iter().enumerate() {
            mask |= 1u64 << v;
            let size = count + 1;
            if size > n / 2 {
                break;
            }
            let cand = Cand {
                boundary: boundary_of_mask(&edges, mask),
                size: size as u64,
                mask,
            };
            best = Some(match best {
                None => cand,
                Some(b) => better(cand, b),
            });
        }
    }
    let best = best.ok_or_else(|| Error::Input("no sweep cut found".into()))?;
    let inflate = |v: f64, up: bool| {
        let eps = 1e-6 * v.abs().max(1.0);
        if up {
            v + eps
        } else {
            (v - eps).max(0.0)
        }
    };
    Ok(CheegerResult {
        value: Ratio::new(best.boundary as i64, best.size as i64),
        witness: mask_to_set(best.mask),
        method: CheegerMethod::Bounds {
            lambda1,
            spectral_lower: inflate(lambda1 / 2.0, false),
            spectral_upper: inflate((2.0 * k * lambda1).sqrt(), true),
        },
    })
}

/// Cheeger with the exact search when it fits, spectral bounds otherwise.
pub fn cheeger_auto(x: &SchreierGraph, max_vertices: usize) -> Result<CheegerResult> {
    match cheeger_exact(x, max_vertices, None) {
        Ok(r) => Ok(r),
        Err(Error::BudgetExceeded { .. }) => cheeger_bounds(x),
        Err(e) => Err(e),
    }
}

/// Outcome of the structured-minimizer search at one chain step.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub enum MinimizerStructure {
    /// h did not strictly decrease; nothing is claimed.
    Equality { h: Ratio<i64> },
    /// Strict decrease: the largest minimizing D, which must satisfy
    /// |V|/4 < |D| ≤ |V|/2.
    StrictDecrease {
        h: Ratio<i64>,
        witness: Vec<usize>,
        size: usize,
        vertex_count: usize,
        exceeds_quarter: bool,
    },
}

/// At a strict Cheeger decrease h(X_i) < h(X_{i-1}), exhibit a minimizer D
/// with |D| > |V|/4 by scanning all minimizers and keeping the largest
/// (ties by lexicographic vertex set).
pub fn minimizer_structure(
    h_prev: Ratio<i64>,
    x: &SchreierGraph,
    max_vertices: usize,
) -> Result<MinimizerStructure> {
    let exact = cheeger_exact(x, max_vertices, None)?;
    let h = exact.value;
    if h >= h_prev {
        return Ok(MinimizerStructure::Equality { h });
    }
    let n = x.vertex_count;
    let edges: Vec<(usize, usize)> = x
        .edges
        .iter()
        .filter(|&&(u, v, _)| u != v)
        .map(|&(u, v, _)| (u, v))
        .collect();
    let half = (n / 2) as u32;
    let total: u64 = 1u64 << n;
    // keep the largest minimizer, ties by lexicographic vertex set
    let pick = |a: Cand, b: Cand| {
        if a.size != b.size {
            if a.size > b.size {
                a
            } else {
                b
            }
        } else if mask_lex_less(a.mask, b.mask) {
            a
        } else {
            b
        }
    };
    let chunk = 1u64 << n.saturating_sub(6).min(16);
    let ranges: Vec<(u64, u64)> = (1..total)
        .step_by(chunk as usize)
        .map(|start| (start, (start + chunk).min(total)))
        .collect();
    let best = ranges
        .into_par_iter()
        .map(|(lo, hi)| {
            let mut local: Option<Cand> = None;
            for mask in lo..hi {
                let size = mask.count_ones();
                if size == 0 || size > half {
                    continue;
                }
                let boundary = boundary_of_mask(&edges, mask);
                if Ratio::new(boundary as i64, size as i64) != h {
                    continue;
                }
                let cand = Cand { boundary, size: size as u64, mask };
                local = Some(match local {
                    None => cand,
                    Some(b) => pick(cand, b),
                });
            }
            local
        })
        .reduce(
            || None,
            |a, b| match (a, b) {
                (None, x) | (x, None) => x,
                (Some(a), Some(b)) => Some(pick(a, b)),
            },
        )
        .expect("a minimizer exists");
    Ok(MinimizerStructure::StrictDecrease {
        h,
        witness: mask_to_set(best.mask),
        size: best.size as usize,
        vertex_count: n,
        exceeds_quarter: 4 * best.size as usize > n,
    })
}

/// Per-level h as reported: exact rational or a marked float bracket.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub enum HValue {
    Exact(Ratio<i64>),
    Bracket { lower: f64, upper: f64, sweep: Ratio<i64> },
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TauLevel {
    pub index: usize,
    /// None at index 1, where no admissible subset exists.
    pub h: Option<HValue>,
    pub dp: usize,
    /// (d_p − 1)/index
    pub gradient: Ratio<i64>,
    /// d_p/index, the linear-growth normalization
    pub dp_over_index: Ratio<i64>,
}

/// Trend diagnostics along a chain: never a Property (τ) verdict, only what
/// the computed levels show.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TauDiagnostics {
    pub levels: Vec<TauLevel>,
    pub h_non_increasing: bool,
    pub gradient_non_increasing: bool,
    pub hint: String,
}

/// Compute per-level h (exact when the graph fits the subset budget),
/// d_p, and both gradient normalizations, with non-increasing checks.
pub fn tau_diagnostics(chain: &SubnormalChain, subset_budget: usize) -> Result<TauDiagnostics> {
    chain.validate()?;
    let p = chain.p;
    let mut levels = Vec::new();
    for t in &chain.tables {
        let index = t.index();
        let h = if index < 2 {
            None
        } else {
            let x = schreier_graph(t);
            match cheeger_exact(&x, subset_budget, None) {
                Ok(r) => Some(HValue::Exact(r.value)),
                Err(Error::BudgetExceeded { .. }) => {
                    let r = cheeger_bounds(&x)?;
                    match r.method {
                        CheegerMethod::Bounds { spectral_lower, spectral_upper, .. } => {
                            Some(HValue::Bracket {
                                lower: spectral_lower,
                                upper: spectral_upper,
                                sweep: r.value,
                            })
                        }
                        CheegerMethod::Exact => Some(HValue::Exact(r.value)),
                    }
                }
                Err(e) => return Err(e),
            }
        };
        let dp = crate::cosets::subgroup_dp(t, p)?;
        levels.push(TauLevel {
            index,
            h,
            dp,
            gradient: Ratio::new(dp as i64 - 1, index as i64),
            dp_over_index: Ratio::new(dp as i64, index as i64),
        });
    }
    let exact_h: Vec<Ratio<i64>> = levels
        .iter()
        .filter_map(|l| match &l.h {
            Some(HValue::Exact(v)) => Some(*v),
            _ => None,
        })
        .collect();
    let h_non_increasing = exact_h.windows(2).all(|w| w[1] <= w[0]);
    let gradient_non_increasing = levels.windows(2).all(|w| w[1].gradient <= w[0].gradient);
    let hint = if let (Some(first), Some(last)) = (exact_h.first(), exact_h.last()) {
        if *last == Ratio::from_integer(0) {
            "h reached 0 (disconnected level)".to_string()
        } else if exact_h.len() >= 2 && last < first && *last * 2 <= *first {
            "h decreasing toward 0".to_string()
        } else {
            "h bounded below so far".to_string()
        }
    } else {
        "h bounded below so far".to_string()
    };
    Ok(TauDiagnostics { levels, h_non_increasing, gradient_non_increasing, hint })
}

/// Convenience: an n-cycle as a Schreier graph (Z acting on Z/n).
pub fn cycle_graph(n: usize) -> SchreierGraph {
    SchreierGraph::new(n, (0..n).map(|c| (c, (c + 1) % n, 0)).collect())
}
