//! Regular mod-p cocycles: construction from cellular cocycles, complement
//! components, the non-separating reduction, the relative version avoiding
//! a subcomplex, and relative size.
//!
//! A regular mod-p cocycle is stored combinatorially: one edge vertex per
//! supported 1-cell (weight in F_p∖{0}) and, in every 2-cell whose boundary
//! meets the support, one interior vertex with an arc to each supported
//! boundary position. "K − Γ" is realized by union-find over corner
//! sectors, 1-cell sides and 0-cells; no geometric subdivision happens.

use std::collections::BTreeMap;

use num_rational::Ratio;

use crate::complexes::{delta1, SubComplex, TwoComplex};
use crate::fplinalg::{mul_mod, sub_mod, MatrixFp};
use crate::util::{SplitMix64, UnionFind};
use crate::words::check_prime;
use crate::{Error, Result};

/// An F_p value per 1-cell.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Cochain1 {
    p: u32,
    values: Vec<u32>,
}

impl Cochain1 {
    pub fn new(p: u32, values: Vec<u32>) -> Self {
        let values = values.into_iter().map(|v| v % p).collect();
        Cochain1 { p, values }
    }

    pub fn zero(p: u32, one_cells: usize) -> Self {
        Cochain1 { p, values: vec![0; one_cells] }
    }

    pub fn from_support(p: u32, one_cells: usize, pairs: &[(usize, u32)]) -> Self {
        let mut values = vec![0u32; one_cells];
        for &(e, w) in pairs {
            values[e] = w % p;
        }
        Cochain1 { p, values }
    }

    pub fn p(&self) -> u32 {
        self.p
    }

    pub fn values(&self) -> &[u32] {
        &self.values
    }

    pub fn support(&self) -> Vec<usize> {
        (0..self.values.len()).filter(|&e| self.values[e] != 0).collect()
    }

    pub fn support_size(&self) -> usize {
        self.values.iter().filter(|&&v| v != 0).count()
    }

    /// self − other, entrywise.
    pub fn sub(&self, other: &Cochain1) -> Cochain1 {
        let values = self
            .values
            .iter()
            .zip(&other.values)
            .map(|(&a, &b)| sub_mod(a, b, self.p))
            .collect();
        Cochain1 { p: self.p, values }
    }
}

/// Check the cocycle predicate: the signed sum over every 2-cell boundary
/// vanishes mod p.
pub fn verify_cocycle(k: &TwoComplex, c: &Cochain1) -> Result<()> {
    if c.values.len() != k.one_cells().len() {
        return Err(Error::DimensionMismatch("cochain length vs 1-cells".into()));
    }
    let p = c.p;
    for (f, bw) in k.two_cells().iter().enumerate() {
        let mut sum = 0u32;
        for s in bw {
            let v = c.values[s.cell];
            sum = if s.inverse { sub_mod(sum, v, p) } else { (sum + v) % p };
        }
        if sum != 0 {
            return Err(Error::NotACocycle { two_cell: f, sum, p });
        }
    }
    Ok(())
}

/// A cellular cocycle from coefficients over the fixed echelon basis of
/// ker δ¹. The zero vector yields the zero cochain; a wrong-length
/// coefficient vector is outside the basis span.
pub fn cocycle_from_class(k: &TwoComplex, p: u32, coeffs: &[u32]) -> Result<Cochain1> {
    check_prime(p)?;
    let basis = delta1(k, p).kernel_basis();
    if coeffs.len() != basis.len() {
        return Err(Error::ClassOutsideSpan);
    }
    let mut values = vec![0u32; k.one_cells().len()];
    for (l, b) in coeffs.iter().zip(&basis) {
        if *l == 0 {
            continue;
        }
        for (v, be) in values.iter_mut().zip(b) {
            *v = (*v + mul_mod(*l, *be, p)) % p;
        }
    }
    Ok(Cochain1 { p, values })
}

/// A regular mod-p cocycle: weighted edge vertices on the supported
/// 1-cells, and per star 2-cell the boundary positions its interior
/// vertex's arcs land on.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RegularModPCocycle {
    p: u32,
    weights: BTreeMap<usize, u32>,
    star_arcs: BTreeMap<usize, Vec<usize>>,
}

impl RegularModPCocycle {
    pub fn p(&self) -> u32 {
        self.p
    }

    pub fn weights(&self) -> &BTreeMap<usize, u32> {
        &self.weights
    }

    pub fn star_arcs(&self) -> &BTreeMap<usize, Vec<usize>> {
        &self.star_arcs
    }

    pub fn supports(&self, e: usize) -> bool {
        self.weights.contains_key(&e)
    }

    pub fn edge_vertex_count(&self) -> usize {
        self.weights.len()
    }

    pub fn arc_count(&self) -> usize {
        self.star_arcs.values().map(|a| a.len()).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.weights.is_empty()
    }

    /// Degenerate empty cocycle, used only for the consistency check that
    /// an empty cut leaves the ambient components.
    pub fn empty(p: u32) -> Self {
        RegularModPCocycle { p, weights: BTreeMap::new(), star_arcs: BTreeMap::new() }
    }

    /// Evaluation back to the cellular cochain it represents.
    pub fn to_cochain(&self, one_cells: usize) -> Cochain1 {
        let mut values = vec![0u32; one_cells];
        for (&e, &w) in &self.weights {
            values[e] = w;
        }
        Cochain1 { p: self.p, values }
    }

    /// Disjoint union of two regular cocycles. Fails when supports touch or
    /// when some 2-cell would need two interior vertices.
    pub fn union(&self, other: &RegularModPCocycle) -> Result<RegularModPCocycle> {
        if self.p != other.p {
            return Err(Error::Input("cocycle moduli differ".into()));
        }
        let mut weights = self.weights.clone();
        for (&e, &w) in &other.weights {
            if weights.insert(e, w).is_some() {
                return Err(Error::Input(format!("cocycles share supported 1-cell {e}")));
            }
        }
        let mut star_arcs = self.star_arcs.clone();
        for (&f, arcs) in &other.star_arcs {
            if star_arcs.insert(f, arcs.clone()).is_some() {
                return Err(Error::Input(format!("cocycles share star 2-cell {f}")));
            }
        }
        Ok(RegularModPCocycle { p: self.p, weights, star_arcs })
    }

    /// Re-check the structural invariants against a complex: weights in
    /// F_p∖{0}, star cells exactly the 2-cells meeting the support, arcs at
    /// exactly the supported positions, and vanishing signed weight sums
    /// around every interior vertex.
    pub fn validate(&self, k: &TwoComplex) -> Result<()> {
        for (&e, &w) in &self.weights {
            if e >= k.one_cells().len() {
                return Err(Error::VerificationFailure(format!("supported 1-cell {e} missing")));
            }
            if w == 0 || w >= self.p {
                return Err(Error::VerificationFailure(format!(
                    "weight {w} on 1-cell {e} outside F_p∖{{0}}"
                )));
            }
        }
        for (f, bw) in k.two_cells().iter().enumerate() {
            let positions: Vec<usize> = (0..bw.len())
                .filter(|&i| self.weights.contains_key(&bw[i].cell))
                .collect();
            match self.star_arcs.get(&f) {
                None => {
                    if !positions.is_empty() {
                        return Err(Error::VerificationFailure(format!(
                            "2-cell {f} meets the support but has no interior vertex"
                        )));
                    }
                }
                Some(arcs) => {
                    if arcs.is_empty() {
                        return Err(Error::VerificationFailure(format!(
                            "interior vertex of 2-cell {f} has no arcs"
                        )));
                    }
                    if *arcs != positions {
                        return Err(Error::VerificationFailure(format!(
                            "arcs of 2-cell {f} disagree with the supported positions"
                        )));
                    }
                    let mut sum = 0u32;
                    for &i in arcs {
                        let s = bw[i];
                        let w = self.weights[&s.cell];
                        sum = if s.inverse {
                            sub_mod(sum, w, self.p)
                        } else {
                            (sum + w) % self.p
                        };
                    }
                    if sum != 0 {
                        return Err(Error::VerificationFailure(format!(
                            "signed weight sum around the interior vertex of 2-cell {f} is {sum}"
                        )));
                    }
                }
            }
        }
        for &f in self.star_arcs.keys() {
            if f >= k.two_cells().len() {
                return Err(Error::VerificationFailure(format!("star 2-cell {f} missing")));
            }
        }
        Ok(())
    }
}

/// Place an edge vertex with weight c(e) on each supported 1-cell, and in
/// every 2-cell whose boundary meets the support a single interior vertex
/// joined to each supported boundary position. Rejects non-cocycles and
/// empty support. The output has exactly |supp(c)| edge vertices and at
/// most M·|supp(c)| arcs for M the maximal valence.
pub fn regularize(k: &TwoComplex, c: &Cochain1) -> Result<RegularModPCocycle> {
    verify_cocycle(k, c)?;
    let mut weights = BTreeMap::new();
    for (e, &w) in c.values.iter().enumerate() {
        if w != 0 {
            weights.insert(e, w);
        }
    }
    if weights.is_empty() {
        return Err(Error::EmptySupport);
    }
    let mut star_arcs = BTreeMap::new();
    for (f, bw) in k.two_cells().iter().enumerate() {
        let positions: Vec<usize> =
            (0..bw.len()).filter(|&i| weights.contains_key(&bw[i].cell)).collect();
        if !positions.is_empty() {
            star_arcs.insert(f, positions);
        }
    }
    let g = RegularModPCocycle { p: c.p, weights, star_arcs };
    debug_assert!(g.validate(k).is_ok());
    Ok(g)
}

/// Which complement piece each cell fragment of K − Γ belongs to.
#[derive(Clone, Debug)]
pub struct ComplementDecomposition {
    component_count: usize,
    vertex_component: Vec<usize>,
    /// (tail-side component, head-side component) per 1-cell; equal for
    /// unsupported 1-cells.
    edge_side_components: Vec<(usize, usize)>,
    /// Component of each corner sector, per star cell in arc order.
    sector_components: BTreeMap<usize, Vec<usize>>,
}

impl ComplementDecomposition {
    pub fn component_count(&self) -> usize {
        self.component_count
    }

    pub fn vertex_component(&self, v: usize) -> usize {
        self.vertex_component[v]
    }

    pub fn edge_side_components(&self, e: usize) -> (usize, usize) {
        self.edge_side_components[e]
    }

    pub fn sector_components(&self) -> &BTreeMap<usize, Vec<usize>> {
        &self.sector_components
    }
}

/// Union-find over the pieces of K − Γ: corner sectors of star cells,
/// whole interiors of non-star 2-cells, 1-cell sides (two per supported
/// 1-cell, one per unsupported), and 0-cells.
pub fn complement_components(k: &TwoComplex, g: &RegularModPCocycle) -> ComplementDecomposition {
    let n0 = k.zero_cells();
    let n1 = k.one_cells().len();
    let n2 = k.two_cells().len();

    let mut one_off = vec![0usize; n1];
    let mut pieces = n0;
    for e in 0..n1 {
        one_off[e] = pieces;
        pieces += if g.supports(e) { 2 } else { 1 };
    }
    let mut two_off = vec![0usize; n2];
    for f in 0..n2 {
        two_off[f] = pieces;
        pieces += g.star_arcs().get(&f).map_or(1, |a| a.len());
    }

    let tail_half = |e: usize| one_off[e];
    let head_half = |e: usize| one_off[e] + 1;
    let whole = |e: usize| one_off[e];

    let mut uf = UnionFind::new(pieces);

    // 1-cell sides meet their endpoint 0-cells
    for (e, &(t, h)) in k.one_cells().iter().enumerate() {
        if g.supports(e) {
            uf.union(tail_half(e), t);
            uf.union(head_half(e), h);
        } else {
            uf.union(whole(e), t);
            uf.union(whole(e), h);
        }
    }

    // 2-cell interiors meet the boundary, except across arcs and edge
    // vertices
    for (f, bw) in k.two_cells().iter().enumerate() {
        match g.star_arcs().get(&f) {
            None => {
                for s in bw {
                    uf.union(two_off[f], whole(s.cell));
                }
            }
            Some(sp) => {
                let m = sp.len();
                let len = bw.len();
                for j in 0..m {
                    let sector = two_off[f] + j;
                    let pos_a = sp[j];
                    let pos_b = sp[(j + 1) % m];
                    // the part of side pos_a after its edge vertex
                    let sa = bw[pos_a];
                    let after =
                        if sa.inverse { tail_half(sa.cell) } else { head_half(sa.cell) };
                    uf.union(sector, after);
                    // the part of side pos_b before its edge vertex
                    let sb = bw[pos_b];
                    let before =
                        if sb.inverse { head_half(sb.cell) } else { tail_half(sb.cell) };
                    uf.union(sector, before);
                    // whole sides strictly between the two arcs
                    let mut q = (pos_a + 1) % len;
                    while q != pos_b {
                        debug_assert!(!g.supports(bw[q].cell));
                        uf.union(sector, whole(bw[q].cell));
                        q = (q + 1) % len;
                    }
                }
            }
        }
    }

    let ids = uf.component_ids();
    let vertex_component = ids[..n0].to_vec();
    let edge_side_components = (0..n1)
        .map(|e| {
            if g.supports(e) {
                (ids[tail_half(e)], ids[head_half(e)])
            } else {
                (ids[whole(e)], ids[whole(e)])
            }
        })
        .collect();
    let sector_components = g
        .star_arcs()
        .iter()
        .map(|(&f, arcs)| (f, (0..arcs.len()).map(|j| ids[two_off[f] + j]).collect()))
        .collect();
    ComplementDecomposition {
        component_count: uf.component_count(),
        vertex_component,
        edge_side_components,
        sector_components,
    }
}

/// Result of the non-separating reduction.
#[derive(Clone, Debug)]
pub enum NonseparatingOutcome {
    /// A non-separating regular mod-p cocycle cohomologous to the input,
    /// with support contained in the input's support. The edge-vertex
    /// history is strictly decreasing — the termination measure.
    Cocycle {
        cocycle: RegularModPCocycle,
        cochain: Cochain1,
        edge_vertex_history: Vec<usize>,
    },
    /// The support emptied out: the class was trivial.
    TrivialClass { edge_vertex_history: Vec<usize> },
}

/// Reduce a cocycle until its regularization is non-separating, by
/// repeatedly zeroing a cluster through a coboundary subtraction
/// c ← c − w·δ(χ_{K₁}). Each pass strictly reduces the edge-vertex count.
pub fn make_nonseparating(k: &TwoComplex, c: &Cochain1) -> Result<NonseparatingOutcome> {
    verify_cocycle(k, c)?;
    let ambient = k.component_count();
    let p = c.p;
    let mut c = c.clone();
    let mut history = Vec::new();
    loop {
        if c.support_size() == 0 {
            return Ok(NonseparatingOutcome::TrivialClass { edge_vertex_history: history });
        }
        let g = regularize(k, &c)?;
        history.push(g.edge_vertex_count());
        let dec = complement_components(k, &g);
        if dec.component_count() == ambient {
            return Ok(NonseparatingOutcome::Cocycle {
                cocycle: g,
                cochain: c,
                edge_vertex_history: history,
            });
        }
        // pick K₁: the component containing the lexicographically least
        // 0-cell incident to a cross-boundary edge vertex; remember the
        // edge that exhibits it
        let mut best: Option<(usize, usize, usize, bool)> = None; // (vertex, comp, edge, tail side)
        for (&e, _) in g.weights() {
            let (ct, ch) = dec.edge_side_components(e);
            if ct == ch {
                continue;
            }
            let (t, h) = k.one_cells()[e];
            for cand in [(t, ct, e, true), (h, ch, e, false)] {
                if best.map_or(true, |b| (cand.0, cand.1, cand.2) < (b.0, b.1, b.2)) {
                    best = Some(cand);
                }
            }
        }
        let Some((_, k1, e0, tail_in_k1)) = best else {
            // cannot happen: a separating cocycle always has an edge vertex
            // with its two sides in different components
            return Err(Error::VerificationFailure(
                "separating cocycle without a cross-boundary edge vertex".into(),
            ));
        };
        // w that zeroes the chosen edge under c ← c − w·δχ
        let w = if tail_in_k1 { (p - c.values[e0]) % p } else { c.values[e0] };
        let mut values = c.values.clone();
        for (e, &(t, h)) in k.one_cells().iter().enumerate() {
            let chi_h = (dec.vertex_component(h) == k1) as u32;
            let chi_t = (dec.vertex_component(t) == k1) as u32;
            let delta = sub_mod(chi_h, chi_t, p);
            if delta != 0 {
                values[e] = sub_mod(values[e], mul_mod(w, delta, p), p);
            }
        }
        debug_assert_eq!(values[e0], 0);
        c = Cochain1 { p, values };
    }
}

/// Prop-3.5-style relative reduction: given a class restricting to zero on
/// `avoid`, produce a representative vanishing on every 1-cell of `avoid`
/// and reduce it to a non-separating regular cocycle. The reduction only
/// shrinks support, so disjointness from `avoid` persists.
pub fn relative_nonseparating(
    k: &TwoComplex,
    avoid: &SubComplex,
    c: &Cochain1,
) -> Result<NonseparatingOutcome> {
    verify_cocycle(k, c)?;
    let p = c.p;
    let (l_complex, l_maps) = avoid.extract();
    let restriction: Vec<u32> = l_maps.one_map.iter().map(|&e| c.values[e]).collect();
    // witness for triviality on avoid: x with δ⁰_L x = c|_L
    let d0_l = crate::complexes::delta0(&l_complex, p);
    let x_local = d0_l
        .transpose()
        .solve_in_span(&restriction)?
        .ok_or(Error::ClassNotTrivialOnAvoid)?;
    let mut x_full = vec![0u32; k.zero_cells()];
    for (local, &v) in l_maps.zero_map.iter().enumerate() {
        x_full[v] = x_local[local];
    }
    let mut values = c.values.clone();
    for (e, &(t, h)) in k.one_cells().iter().enumerate() {
        let d = sub_mod(x_full[h], x_full[t], p);
        values[e] = sub_mod(values[e], d, p);
    }
    let adjusted = Cochain1 { p, values };
    debug_assert!(l_maps.one_map.iter().all(|&e| adjusted.values[e] == 0));
    let outcome = make_nonseparating(k, &adjusted)?;
    if let NonseparatingOutcome::Cocycle { cochain, .. } = &outcome {
        debug_assert!(l_maps.one_map.iter().all(|&e| cochain.values[e] == 0));
    }
    Ok(outcome)
}

/// Relative size of the class of `c`: min support over representatives
/// c + δ⁰(x), divided by the number of 1-cells. Exact when the p^rank(δ⁰)
/// distinct coboundaries fit the budget; otherwise a best-found upper bound
/// over deterministic samples, flagged inexact.
pub fn relative_size(k: &TwoComplex, c: &Cochain1, budget: u64) -> Result<(Ratio<i64>, bool)> {
    verify_cocycle(k, c)?;
    let n1 = k.one_cells().len();
    if n1 == 0 {
        return Ok((Ratio::from_integer(0), true));
    }
    let p = c.p;
    // basis of im δ⁰ = row space of ∂₁
    let basis: Vec<Vec<u32>> = crate::complexes::boundary1(k, p).row_basis();
    let r = basis.len() as u32;
    let total = (p as u64).checked_pow(r);
    let mut best = c.support_size();
    if let Some(total) = total.filter(|&t| t <= budget) {
        // odometer over all coefficient vectors, updating incrementally
        let mut current = c.values.clone();
        let mut digits = vec![0u32; r as usize];
        let mut visited = 1u64;
        'outer: while visited < total {
            let mut i = 0usize;
            loop {
                if i == r as usize {
                    break 'outer;
                }
                digits[i] += 1;
                for (cv, bv) in current.iter_mut().zip(&basis[i]) {
                    *cv = (*cv + *bv) % p;
                }
                if digits[i] < p {
                    break;
                }
                digits[i] = 0;
                i += 1;
            }
            visited += 1;
            let w = current.iter().filter(|&&v| v != 0).count();
            if w < best {
                best = w;
            }
        }
        Ok((Ratio::new(best as i64, n1 as i64), true))
    } else {
        // single-basis shifts plus deterministic random combinations
        for b in &basis {
            let mut shifted = c.values.clone();
            for _ in 1..p {
                for (sv, bv) in shifted.iter_mut().zip(b) {
                    *sv = (*sv + *bv) % p;
                }
                let w = shifted.iter().filter(|&&v| v != 0).count();
                if w < best {
                    best = w;
                }
            }
        }
        let mut rng = SplitMix64::new(0x5eed_0000_c0cc_1e5f);
        let samples = budget.min(2048);
        for _ in 0..samples {
            let mut shifted = c.values.clone();
            for b in &basis {
                let t = rng.below(p as u64) as u32;
                if t == 0 {
                    continue;
                }
                for (sv, bv) in shifted.iter_mut().zip(b) {
                    *sv = (*sv + mul_mod(t, *bv, p)) % p;
                }
            }
            let w = shifted.iter().filter(|&&v| v != 0).count();
            if w < best {
                best = w;
            }
        }
        Ok((Ratio::new(best as i64, n1 as i64), false))
    }
}

/// Membership of `candidate - reference` in im δ⁰ (cohomologous test).
pub fn is_coboundary(k: &TwoComplex, diff: &Cochain1) -> Result<bool> {
    let p = diff.p;
    let basis: Vec<Vec<u32>> = crate::complexes::boundary1(k, p).row_basis();
    if basis.is_empty() {
        return Ok(diff.support_size() == 0);
    }
    let m = MatrixFp::from_rows(p, k.one_cells().len(), &basis)?;
    Ok(m.solve_in_span(diff.values())?.is_some())
}
