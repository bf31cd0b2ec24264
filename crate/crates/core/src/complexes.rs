//! Combinatorial 2-complexes: presentation complexes, finite covers,
//! subcomplexes and cellular homology/cohomology over F_p. Everything here
//! is closure arithmetic on cell index sets; there is no geometric
//! realization.

use std::collections::VecDeque;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::cosets::CosetTable;
use crate::fplinalg::{Echelon, MatrixFp};
use crate::util::UnionFind;
use crate::words::{check_prime, Presentation};
use crate::{Error, Result};

/// One step of a 2-cell boundary word: a 1-cell traversed forwards or
/// backwards.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BoundaryStep {
    pub cell: usize,
    pub inverse: bool,
}

impl BoundaryStep {
    pub fn new(cell: usize, inverse: bool) -> Self {
        BoundaryStep { cell, inverse }
    }
}

/// A finite 2-complex: counted 0-cells, 1-cells with (tail, head), and
/// 2-cells given by closed boundary edge paths.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TwoComplex {
    zero_cells: usize,
    one_cells: Vec<(usize, usize)>,
    two_cells: Vec<Vec<BoundaryStep>>,
}

impl TwoComplex {
    pub fn new(
        zero_cells: usize,
        one_cells: Vec<(usize, usize)>,
        two_cells: Vec<Vec<BoundaryStep>>,
    ) -> Result<Self> {
        for (i, &(t, h)) in one_cells.iter().enumerate() {
            if t >= zero_cells || h >= zero_cells {
                return Err(Error::Input(format!("1-cell {i} has endpoint out of range")));
            }
        }
        let k = TwoComplex { zero_cells, one_cells, two_cells };
        for (i, bw) in k.two_cells.iter().enumerate() {
            if bw.is_empty() {
                return Err(Error::Input(format!("2-cell {i} has an empty boundary word")));
            }
            let mut cur = k.step_from(bw[0]);
            for &s in bw {
                if s.cell >= k.one_cells.len() {
                    return Err(Error::Input(format!("2-cell {i} references a missing 1-cell")));
                }
                if k.step_from(s) != cur {
                    return Err(Error::Input(format!("2-cell {i} boundary is not a path")));
                }
                cur = k.step_to(s);
            }
            if cur != k.step_from(bw[0]) {
                return Err(Error::Input(format!("2-cell {i} boundary path does not close")));
            }
        }
        Ok(k)
    }

    pub fn zero_cells(&self) -> usize {
        self.zero_cells
    }

    pub fn one_cells(&self) -> &[(usize, usize)] {
        &self.one_cells
    }

    pub fn two_cells(&self) -> &[Vec<BoundaryStep>] {
        &self.two_cells
    }

    /// Vertex a boundary step departs from.
    pub fn step_from(&self, s: BoundaryStep) -> usize {
        let (t, h) = self.one_cells[s.cell];
        if s.inverse {
            h
        } else {
            t
        }
    }

    /// Vertex a boundary step arrives at.
    pub fn step_to(&self, s: BoundaryStep) -> usize {
        let (t, h) = self.one_cells[s.cell];
        if s.inverse {
            t
        } else {
            h
        }
    }

    pub fn euler_characteristic(&self) -> i64 {
        self.zero_cells as i64 - self.one_cells.len() as i64 + self.two_cells.len() as i64
    }

    /// Total number of times 2-cells run over each 1-cell.
    pub fn valences(&self) -> Vec<usize> {
        let mut v = vec![0usize; self.one_cells.len()];
        for bw in &self.two_cells {
            for s in bw {
                v[s.cell] += 1;
            }
        }
        v
    }

    /// Connected components of the underlying space (2-cells attach along
    /// their boundary, so vertex components through 1-cells suffice).
    pub fn component_count(&self) -> usize {
        if self.zero_cells == 0 {
            return 0;
        }
        let mut uf = UnionFind::new(self.zero_cells);
        for &(t, h) in &self.one_cells {
            uf.union(t, h);
        }
        uf.component_count()
    }
}

/// ∂₁: C₁ → C₀ over F_p (rows = 0-cells, cols = 1-cells); a loop's column
/// is zero.
pub fn boundary1(k: &TwoComplex, p: u32) -> MatrixFp {
    let mut m = MatrixFp::zeros(p, k.zero_cells(), k.one_cells().len());
    for (e, &(t, h)) in k.one_cells().iter().enumerate() {
        if t == h {
            continue;
        }
        m.set(h, e, 1);
        m.set(t, e, p - 1);
    }
    m
}

/// ∂₂: C₂ → C₁ over F_p (rows = 1-cells, cols = 2-cells); entries are
/// signed occurrence counts of each 1-cell in the boundary word.
pub fn boundary2(k: &TwoComplex, p: u32) -> MatrixFp {
    let mut m = MatrixFp::zeros(p, k.one_cells().len(), k.two_cells().len());
    for (f, bw) in k.two_cells().iter().enumerate() {
        for s in bw {
            let cur = m.get(s.cell, f);
            let v = if s.inverse { (cur + p - 1) % p } else { (cur + 1) % p };
            m.set(s.cell, f, v);
        }
    }
    m
}

/// δ⁰ = ∂₁ᵀ: C⁰ → C¹.
pub fn delta0(k: &TwoComplex, p: u32) -> MatrixFp {
    boundary1(k, p).transpose()
}

/// δ¹ = ∂₂ᵀ: C¹ → C².
pub fn delta1(k: &TwoComplex, p: u32) -> MatrixFp {
    boundary2(k, p).transpose()
}

/// Dimensions of H₀ and H₁ over F_p plus the boundary ranks they came from.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct HomologyProfile {
    pub p: u32,
    pub d0: usize,
    pub d1: usize,
    pub rank_boundary1: usize,
    pub rank_boundary2: usize,
}

/// Cellular homology over F_p: d1 = dim ker ∂₁ − rank ∂₂,
/// d0 = zero_cells − rank ∂₁. A disconnected complex contributes the sum of
/// its components' dimensions.
pub fn homology_profile(k: &TwoComplex, p: u32) -> Result<HomologyProfile> {
    check_prime(p)?;
    let b1 = boundary1(k, p);
    let b2 = boundary2(k, p);
    let rank1 = b1.rank();
    let rank2 = b2.rank();
    let cycles = k.one_cells().len() - rank1;
    Ok(HomologyProfile {
        p,
        d0: k.zero_cells() - rank1,
        d1: cycles - rank2,
        rank_boundary1: rank1,
        rank_boundary2: rank2,
    })
}

/// Presentation complex: one 0-cell, a loop per generator, a 2-cell per
/// relator whose boundary word is the relator.
pub fn presentation_complex(pres: &Presentation) -> TwoComplex {
    let one_cells = vec![(0usize, 0usize); pres.generator_count()];
    let two_cells = pres
        .relators()
        .iter()
        .map(|r| {
            r.letters()
                .iter()
                .map(|l| BoundaryStep::new(l.generator, l.inverse))
                .collect()
        })
        .collect();
    TwoComplex { zero_cells: 1, one_cells, two_cells }
}

/// The covering complex of a presentation complex along a coset table:
/// vertices are cosets, 1-cells are (generator, coset) pairs with id
/// g·index + c, and each cycle of the permutation c ↦ c·r contributes one
/// 2-cell whose boundary is the full concatenated lift of the relator.
pub fn covering_complex(k: &TwoComplex, t: &CosetTable) -> Result<TwoComplex> {
    let pres = t.presentation();
    if *k != presentation_complex(pres) {
        return Err(Error::Input(
            "covering_complex requires the presentation complex of the table's presentation".into(),
        ));
    }
    let index = t.index();
    let gens = pres.generator_count();
    let mut one_cells = Vec::with_capacity(gens * index);
    for g in 0..gens {
        for c in 0..index {
            one_cells.push((c, t.action()[g][c] as usize));
        }
    }
    let mut two_cells = Vec::new();
    for r in pres.relators() {
        let mut seen = vec![false; index];
        for start in 0..index {
            if seen[start] {
                continue;
            }
            // cycle of c ↦ c·r through `start`
            let mut cycle_len = 0usize;
            let mut c = start;
            loop {
                seen[c] = true;
                cycle_len += 1;
                c = t.trace(c, r);
                if c == start {
                    break;
                }
            }
            let mut bw = Vec::with_capacity(cycle_len * r.len());
            let mut cur = start;
            for _ in 0..cycle_len {
                for &l in r.letters() {
                    if l.inverse {
                        let from = t.inverse_action()[l.generator][cur] as usize;
                        bw.push(BoundaryStep::new(l.generator * index + from, true));
                        cur = from;
                    } else {
                        bw.push(BoundaryStep::new(l.generator * index + cur, false));
                        cur = t.action()[l.generator][cur] as usize;
                    }
                }
            }
            debug_assert_eq!(cur, start);
            two_cells.push(bw);
        }
    }
    TwoComplex::new(index, one_cells, two_cells)
}

// ---------------------------------------------------------------------------
// Subcomplexes
// ---------------------------------------------------------------------------

/// A closed subcomplex of a parent complex, stored as kept-index sets.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SubComplex {
    parent: Arc<TwoComplex>,
    kept_zero: Vec<bool>,
    kept_one: Vec<bool>,
    kept_two: Vec<bool>,
}

impl SubComplex {
    /// Validates closure: a kept 1-cell keeps its endpoints, a kept 2-cell
    /// keeps its boundary 1-cells.
    pub fn new(
        parent: Arc<TwoComplex>,
        kept_zero: Vec<bool>,
        kept_one: Vec<bool>,
        kept_two: Vec<bool>,
    ) -> Result<Self> {
        if kept_zero.len() != parent.zero_cells()
            || kept_one.len() != parent.one_cells().len()
            || kept_two.len() != parent.two_cells().len()
        {
            return Err(Error::DimensionMismatch("subcomplex mask lengths".into()));
        }
        for (e, &(t, h)) in parent.one_cells().iter().enumerate() {
            if kept_one[e] && (!kept_zero[t] || !kept_zero[h]) {
                return Err(Error::Input(format!("subcomplex drops an endpoint of 1-cell {e}")));
            }
        }
        for (f, bw) in parent.two_cells().iter().enumerate() {
            if kept_two[f] && bw.iter().any(|s| !kept_one[s.cell]) {
                return Err(Error::Input(format!(
                    "subcomplex drops a boundary 1-cell of 2-cell {f}"
                )));
            }
        }
        Ok(SubComplex { parent, kept_zero, kept_one, kept_two })
    }

    pub fn full(parent: Arc<TwoComplex>) -> Self {
        let kept_zero = vec![true; parent.zero_cells()];
        let kept_one = vec![true; parent.one_cells().len()];
        let kept_two = vec![true; parent.two_cells().len()];
        SubComplex { parent, kept_zero, kept_one, kept_two }
    }

    pub fn parent(&self) -> &Arc<TwoComplex> {
        &self.parent
    }

    pub fn keeps_zero(&self, v: usize) -> bool {
        self.kept_zero[v]
    }

    pub fn keeps_one(&self, e: usize) -> bool {
        self.kept_one[e]
    }

    pub fn keeps_two(&self, f: usize) -> bool {
        self.kept_two[f]
    }

    pub fn kept_zero_count(&self) -> usize {
        self.kept_zero.iter().filter(|&&b| b).count()
    }

    pub fn kept_one_indices(&self) -> Vec<usize> {
        (0..self.kept_one.len()).filter(|&e| self.kept_one[e]).collect()
    }

    pub fn kept_zero_indices(&self) -> Vec<usize> {
        (0..self.kept_zero.len()).filter(|&v| self.kept_zero[v]).collect()
    }

    pub fn kept_two_indices(&self) -> Vec<usize> {
        (0..self.kept_two.len()).filter(|&f| self.kept_two[f]).collect()
    }

    /// Cell-wise intersection with another subcomplex of the same parent.
    pub fn intersect(&self, other: &SubComplex) -> Result<SubComplex> {
        if !Arc::ptr_eq(&self.parent, &other.parent) && self.parent != other.parent {
            return Err(Error::Input("subcomplexes of different parents".into()));
        }
        let and = |a: &[bool], b: &[bool]| a.iter().zip(b).map(|(&x, &y)| x && y).collect();
        SubComplex::new(
            Arc::clone(&self.parent),
            and(&self.kept_zero, &other.kept_zero),
            and(&self.kept_one, &other.kept_one),
            and(&self.kept_two, &other.kept_two),
        )
    }

    /// True when the union of kept cells is the whole parent.
    pub fn union_is_parent(&self, other: &SubComplex) -> bool {
        self.kept_zero.iter().zip(&other.kept_zero).all(|(&a, &b)| a || b)
            && self.kept_one.iter().zip(&other.kept_one).all(|(&a, &b)| a || b)
            && self.kept_two.iter().zip(&other.kept_two).all(|(&a, &b)| a || b)
    }

    /// Extract a standalone complex plus the new-to-parent index maps.
    pub fn extract(&self) -> (TwoComplex, SubMaps) {
        let zero_map = self.kept_zero_indices();
        let one_map = self.kept_one_indices();
        let two_map = self.kept_two_indices();
        let mut zero_inv = vec![usize::MAX; self.parent.zero_cells()];
        for (new, &old) in zero_map.iter().enumerate() {
            zero_inv[old] = new;
        }
        let mut one_inv = vec![usize::MAX; self.parent.one_cells().len()];
        for (new, &old) in one_map.iter().enumerate() {
            one_inv[old] = new;
        }
        let one_cells = one_map
            .iter()
            .map(|&e| {
                let (t, h) = self.parent.one_cells()[e];
                (zero_inv[t], zero_inv[h])
            })
            .collect();
        let two_cells = two_map
            .iter()
            .map(|&f| {
                self.parent.two_cells()[f]
                    .iter()
                    .map(|s| BoundaryStep::new(one_inv[s.cell], s.inverse))
                    .collect()
            })
            .collect();
        let complex = TwoComplex {
            zero_cells: zero_map.len(),
            one_cells,
            two_cells,
        };
        (complex, SubMaps { zero_map, one_map, two_map, one_inv, zero_inv })
    }

    pub fn homology(&self, p: u32) -> Result<HomologyProfile> {
        let (complex, _) = self.extract();
        homology_profile(&complex, p)
    }
}

/// New-index → parent-index maps (plus inverse lookups) for an extracted
/// subcomplex.
#[derive(Clone, Debug)]
pub struct SubMaps {
    pub zero_map: Vec<usize>,
    pub one_map: Vec<usize>,
    pub two_map: Vec<usize>,
    pub one_inv: Vec<usize>,
    pub zero_inv: Vec<usize>,
}

/// Vertex-cut decomposition: A is the closure of the cells meeting `d_set`,
/// B the closure of the cells meeting the complement, C = A ∩ B. Always
/// satisfies A ∪ B = K.
pub fn cut_decomposition(
    k: &Arc<TwoComplex>,
    d_set: &[usize],
) -> Result<(SubComplex, SubComplex, SubComplex)> {
    let n0 = k.zero_cells();
    let mut in_d = vec![false; n0];
    for &v in d_set {
        if v >= n0 {
            return Err(Error::Input(format!("cut vertex {v} out of range")));
        }
        in_d[v] = true;
    }
    let d_size = in_d.iter().filter(|&&b| b).count();
    if d_size == 0 || d_size == n0 {
        return Err(Error::Input("cut vertex set must be non-empty and proper".into()));
    }
    let side = |want_d: bool| -> Result<SubComplex> {
        let meets = |v: usize| in_d[v] == want_d;
        let mut kept_two = vec![false; k.two_cells().len()];
        for (f, bw) in k.two_cells().iter().enumerate() {
            kept_two[f] = bw.iter().any(|&s| meets(k.step_from(s)));
        }
        let mut kept_one = vec![false; k.one_cells().len()];
        for (e, &(t, h)) in k.one_cells().iter().enumerate() {
            kept_one[e] = meets(t) || meets(h);
        }
        for (f, bw) in k.two_cells().iter().enumerate() {
            if kept_two[f] {
                for s in bw {
                    kept_one[s.cell] = true;
                }
            }
        }
        let mut kept_zero = vec![false; n0];
        for v in 0..n0 {
            kept_zero[v] = meets(v);
        }
        for (e, &(t, h)) in k.one_cells().iter().enumerate() {
            if kept_one[e] {
                kept_zero[t] = true;
                kept_zero[h] = true;
            }
        }
        SubComplex::new(Arc::clone(k), kept_zero, kept_one, kept_two)
    };
    let a = side(true)?;
    let b = side(false)?;
    let c = a.intersect(&b)?;
    debug_assert!(a.union_is_parent(&b));
    Ok((a, b, c))
}

/// The 1-dimensional subcomplex of a cover spanned by the edges whose
/// generator label lies in `labels` (edge id = label·index + coset). Keeps
/// every vertex.
pub fn labelled_subgraph(
    cover: &Arc<TwoComplex>,
    index: usize,
    labels: &[usize],
) -> Result<SubComplex> {
    let n1 = cover.one_cells().len();
    if index == 0 || n1 % index != 0 {
        return Err(Error::Input("cover edge count is not a multiple of the index".into()));
    }
    let mut kept_one = vec![false; n1];
    for &g in labels {
        for c in 0..index {
            let e = g * index + c;
            if e >= n1 {
                return Err(Error::Input(format!("label {g} out of range")));
            }
            kept_one[e] = true;
        }
    }
    SubComplex::new(
        Arc::clone(cover),
        vec![true; cover.zero_cells()],
        kept_one,
        vec![false; cover.two_cells().len()],
    )
}

/// Basis of the cycle space of a subcomplex's 1-skeleton, embedded as
/// vectors over the parent's 1-cells.
pub fn embedded_cycle_basis(sub: &SubComplex, p: u32) -> Vec<Vec<u32>> {
    let (complex, maps) = sub.extract();
    let b1 = boundary1(&complex, p);
    let n1 = sub.parent().one_cells().len();
    b1.kernel_basis()
        .into_iter()
        .map(|v| {
            let mut big = vec![0u32; n1];
            for (local, &value) in v.iter().enumerate() {
                big[maps.one_map[local]] = value;
            }
            big
        })
        .collect()
}

/// Whether H₁(sub; F_p) → H₁(parent; F_p) is onto: the embedded cycles of
/// the subcomplex together with im ∂₂ must span ker ∂₁ of the parent.
pub fn h1_map_is_onto(sub: &SubComplex, p: u32) -> Result<bool> {
    let parent = sub.parent();
    let b1 = boundary1(parent, p);
    let target_dim = parent.one_cells().len() - b1.rank();
    let mut ech = Echelon::new(p, parent.one_cells().len());
    let b2 = boundary2(parent, p);
    for col in 0..parent.two_cells().len() {
        let v: Vec<u32> = (0..parent.one_cells().len()).map(|r| b2.get(r, col)).collect();
        ech.insert(&v);
    }
    for v in embedded_cycle_basis(sub, p) {
        ech.insert(&v);
    }
    Ok(ech.rank() == target_dim)
}

/// Connectivity of a subcomplex's 1-skeleton restricted to its kept
/// vertices and edges.
pub fn subcomplex_graph_components(sub: &SubComplex) -> usize {
    let verts = sub.kept_zero_indices();
    if verts.is_empty() {
        return 0;
    }
    let mut local = vec![usize::MAX; sub.parent().zero_cells()];
    for (i, &v) in verts.iter().enumerate() {
        local[v] = i;
    }
    let mut uf = UnionFind::new(verts.len());
    for e in sub.kept_one_indices() {
        let (t, h) = sub.parent().one_cells()[e];
        uf.union(local[t], local[h]);
    }
    uf.component_count()
}

// ---------------------------------------------------------------------------
// Hypothesis checks for the converse theorems
// ---------------------------------------------------------------------------

/// Violations of the "no locally separating points, no valence-1 1-cells"
/// hypotheses. Detected and reported only; no surgery is performed.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct HypothesisReport {
    pub valence_one_cells: Vec<usize>,
    pub valence_zero_cells: Vec<usize>,
    pub locally_separating_vertices: Vec<usize>,
}

impl HypothesisReport {
    pub fn clean(&self) -> bool {
        self.valence_one_cells.is_empty()
            && self.valence_zero_cells.is_empty()
            && self.locally_separating_vertices.is_empty()
    }
}

/// Valence-1 cells by count; local separation by link-graph connectivity.
/// The link of a vertex has one node per incident 1-cell end and one edge
/// per 2-cell corner passing through the vertex; a disconnected link with
/// at least two pieces means the vertex locally separates. Interior points
/// of valence-0 1-cells always locally separate, so those cells are listed
/// separately.
pub fn hypothesis_report(k: &TwoComplex) -> HypothesisReport {
    let valences = k.valences();
    let valence_one_cells: Vec<usize> =
        (0..valences.len()).filter(|&e| valences[e] == 1).collect();
    let valence_zero_cells: Vec<usize> =
        (0..valences.len()).filter(|&e| valences[e] == 0).collect();

    // link nodes: (edge, end) with end 0 = tail, 1 = head
    let link_node = |e: usize, end: usize| 2 * e + end;
    let mut node_vertex = vec![usize::MAX; 2 * k.one_cells().len()];
    for (e, &(t, h)) in k.one_cells().iter().enumerate() {
        node_vertex[link_node(e, 0)] = t;
        node_vertex[link_node(e, 1)] = h;
    }
    let mut uf = UnionFind::new(2 * k.one_cells().len());
    for bw in k.two_cells() {
        let n = bw.len();
        for i in 0..n {
            let s = bw[i];
            let s_next = bw[(i + 1) % n];
            // corner between step i and step i+1 sits at step_to(s)
            let at_end = if s.inverse { 0 } else { 1 };
            let from_end = if s_next.inverse { 1 } else { 0 };
            uf.union(link_node(s.cell, at_end), link_node(s_next.cell, from_end));
        }
    }
    let ids = uf.component_ids();
    let mut vertex_components: Vec<std::collections::BTreeSet<usize>> =
        vec![Default::default(); k.zero_cells()];
    for (node, &v) in node_vertex.iter().enumerate() {
        if v != usize::MAX {
            vertex_components[v].insert(ids[node]);
        }
    }
    let locally_separating_vertices = (0..k.zero_cells())
        .filter(|&v| vertex_components[v].len() >= 2)
        .collect();
    HypothesisReport {
        valence_one_cells,
        valence_zero_cells,
        locally_separating_vertices,
    }
}

/// BFS ball of given radius around a vertex in the 1-skeleton.
pub fn bfs_ball(k: &TwoComplex, center: usize, radius: usize) -> Vec<usize> {
    let mut dist = vec![usize::MAX; k.zero_cells()];
    dist[center] = 0;
    let mut adj: Vec<Vec<usize>> = vec![Vec::new(); k.zero_cells()];
    for &(t, h) in k.one_cells() {
        adj[t].push(h);
        adj[h].push(t);
    }
    let mut queue = VecDeque::from([center]);
    while let Some(v) = queue.pop_front() {
        if dist[v] == radius {
            continue;
        }
        for &w in &adj[v] {
            if dist[w] == usize::MAX {
                dist[w] = dist[v] + 1;
                queue.push_back(w);
            }
        }
    }
    (0..k.zero_cells()).filter(|&v| dist[v] <= radius).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cosets::{from_quotient, todd_coxeter, CosetTable};
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

    fn torus() -> Arc<Presentation> {
        pres(&["a", "b"], &[&[(0, 1), (1, 1), (0, -1), (1, -1)]])
    }

    #[test]
    fn presentation_complex_shapes() {
        let wedge = presentation_complex(&pres(&["a", "b"], &[]));
        assert_eq!(wedge.zero_cells(), 1);
        assert_eq!(wedge.one_cells().len(), 2);
        assert_eq!(wedge.two_cells().len(), 0);

        let t = presentation_complex(&torus());
        assert_eq!((t.zero_cells(), t.one_cells().len(), t.two_cells().len()), (1, 2, 1));

        let g2 = presentation_complex(&pres(
            &["a", "b", "c", "d"],
            &[&[(0, 1), (1, 1), (0, -1), (1, -1), (2, 1), (3, 1), (2, -1), (3, -1)]],
        ));
        assert_eq!(g2.euler_characteristic(), 1 - 4 + 1);
    }

    #[test]
    fn homology_basics() {
        let wedge = presentation_complex(&pres(&["a", "b"], &[]));
        for p in [2u32, 3, 5] {
            let h = homology_profile(&wedge, p).unwrap();
            assert_eq!((h.d0, h.d1), (1, 2));
        }
        let t = presentation_complex(&torus());
        assert_eq!(homology_profile(&t, 2).unwrap().d1, 2);

        // projective plane <a | a^2>
        let rp2 = presentation_complex(&pres(&["a"], &[&[(0, 1), (0, 1)]]));
        assert_eq!(homology_profile(&rp2, 2).unwrap().d1, 1);
        assert_eq!(homology_profile(&rp2, 3).unwrap().d1, 0);
    }

    #[test]
    fn covering_complex_identity_and_wedge() {
        let w = pres(&["a", "b"], &[]);
        let k = presentation_complex(&w);
        let t1 = CosetTable::trivial(Arc::clone(&w));
        let cover = covering_complex(&k, &t1).unwrap();
        assert_eq!(cover, k);

        // index-2 kernel of a -> 1, b -> 0 mod 2
        let spec = FiniteQuotientSpec::new(&w, 2, vec![vec![1, 0], vec![0, 1]]).unwrap();
        let t = from_quotient(&w, &spec, 0).unwrap();
        let cover = covering_complex(&k, &t).unwrap();
        assert_eq!(cover.zero_cells(), 2);
        assert_eq!(cover.one_cells().len(), 4);
        assert_eq!(homology_profile(&cover, 2).unwrap().d1, 3);
    }

    #[test]
    fn covering_complex_torus() {
        let p = torus();
        let k = presentation_complex(&p);
        let gens = vec![
            Word::from_signed(&[(0, 1), (0, 1)]),
            Word::from_signed(&[(1, 1), (1, 1)]),
        ];
        let t = todd_coxeter(&p, &gens, 100).unwrap();
        assert_eq!(t.index(), 4);
        let cover = covering_complex(&k, &t).unwrap();
        assert_eq!(cover.euler_characteristic(), 4 * k.euler_characteristic());
        for prime in [2u32, 3, 5] {
            assert_eq!(homology_profile(&cover, prime).unwrap().d1, 2);
        }
    }

    #[test]
    fn chi_multiplies_on_free_covers() {
        let w = pres(&["a", "b"], &[]);
        let k = presentation_complex(&w);
        for n in [2usize, 3, 5] {
            let images = vec![
                (0..n).map(|i| (i + 1) % n).collect::<Vec<_>>(),
                (0..n).collect::<Vec<_>>(),
            ];
            let spec = FiniteQuotientSpec::new(&w, n, images).unwrap();
            let t = from_quotient(&w, &spec, 0).unwrap();
            let cover = covering_complex(&k, &t).unwrap();
            assert_eq!(cover.euler_characteristic(), n as i64 * k.euler_characteristic());
        }
    }

    #[test]
    fn cut_decomposition_properties() {
        let p = torus();
        let k = presentation_complex(&p);
        let gens = vec![
            Word::from_signed(&[(0, 1), (0, 1)]),
            Word::from_signed(&[(1, 1), (1, 1)]),
        ];
        let t = todd_coxeter(&p, &gens, 100).unwrap();
        let cover = Arc::new(covering_complex(&k, &t).unwrap());
        let (a, b, c) = cut_decomposition(&cover, &[0, 1]).unwrap();
        assert!(a.union_is_parent(&b));
        assert_eq!(a.intersect(&b).unwrap(), c);
        // direct definition re-check, cell by cell
        for (f, bw) in cover.two_cells().iter().enumerate() {
            let meets_d = bw.iter().any(|&s| {
                let v = cover.step_from(s);
                v == 0 || v == 1
            });
            assert_eq!(a.keeps_two(f), meets_d);
        }
        // d_set = all but one vertex: B is the closure of the cells at the
        // remaining vertex
        let (_, b2, _) = cut_decomposition(&cover, &[0, 1, 2]).unwrap();
        for (e, &(tl, hd)) in cover.one_cells().iter().enumerate() {
            let at_v3 = tl == 3 || hd == 3;
            if at_v3 {
                assert!(b2.keeps_one(e));
            }
        }
    }

    #[test]
    fn labelled_subgraph_cases() {
        let w = pres(&["a", "b"], &[]);
        let k = presentation_complex(&w);
        let spec = FiniteQuotientSpec::new(&w, 2, vec![vec![1, 0], vec![0, 1]]).unwrap();
        let t = from_quotient(&w, &spec, 0).unwrap();
        let cover = Arc::new(covering_complex(&k, &t).unwrap());
        let full = labelled_subgraph(&cover, 2, &[0, 1]).unwrap();
        assert_eq!(full.kept_one_indices().len(), 4);
        let only_a = labelled_subgraph(&cover, 2, &[0]).unwrap();
        assert_eq!(only_a.kept_one_indices().len(), 2);
        assert_eq!(only_a.kept_zero_count(), 2);
    }

    #[test]
    fn hypothesis_report_examples() {
        // wedge of two circles: the wedge point locally separates
        let w = presentation_complex(&pres(&["a", "b"], &[]));
        let rep = hypothesis_report(&w);
        assert_eq!(rep.locally_separating_vertices, vec![0]);
        assert_eq!(rep.valence_zero_cells, vec![0, 1]);

        // torus: clean
        let t = presentation_complex(&torus());
        let rep = hypothesis_report(&t);
        assert!(rep.clean());

        // <a | a^2>: valence 2, link of the vertex is connected
        let rp2 = presentation_complex(&pres(&["a"], &[&[(0, 1), (0, 1)]]));
        assert!(hypothesis_report(&rp2).clean());

        // <a | a>: valence-1 cell
        let disc = presentation_complex(&pres(&["a"], &[&[(0, 1)]]));
        assert_eq!(hypothesis_report(&disc).valence_one_cells, vec![0]);
    }

    #[test]
    fn h1_onto_for_full_subgraph_of_wedge_cover() {
        let w = pres(&["a", "b"], &[]);
        let k = presentation_complex(&w);
        let spec = FiniteQuotientSpec::new(&w, 2, vec![vec![1, 0], vec![0, 1]]).unwrap();
        let t = from_quotient(&w, &spec, 0).unwrap();
        let cover = Arc::new(covering_complex(&k, &t).unwrap());
        let full = labelled_subgraph(&cover, 2, &[0, 1]).unwrap();
        assert!(h1_map_is_onto(&full, 2).unwrap());
        assert_eq!(subcomplex_graph_components(&full), 1);
    }
}
