//! Largeness certificates: the restriction-kernel criterion on a vertex
//! cut, disjoint non-separating cocycle pairs, witness loops, the explicit
//! epimorphism words into (Z/pZ) ∗ (Z/pZ), mod-p Cheeger upper bounds, and
//! the cut-decomposition diagnostics with their edge-type tallies.

use std::sync::Arc;

use num_rational::Ratio;
use serde::{Deserialize, Serialize};

use crate::cocycles::{
    complement_components, regularize, relative_nonseparating, Cochain1, NonseparatingOutcome,
    RegularModPCocycle,
};
use crate::complexes::{
    boundary1, boundary2, cut_decomposition, delta1, labelled_subgraph, SubComplex, TwoComplex,
};
use crate::cosets::{CosetTable, SchreierSystem};
use crate::fplinalg::{Echelon, MatrixFp};
use crate::util::prime_power_ratio;
use crate::words::{abelianized_mod_p, check_prime, Letter, Presentation};
use crate::{Error, Result};

/// One letter of a free-product word: (factor index, exponent in 1..p).
pub type FreeProductLetter = (usize, u32);
/// A word in ∗ⁿ(Z/pZ), adjacent letters in distinct factors.
pub type FreeProductWord = Vec<FreeProductLetter>;

/// Images of loops under the crossing-word homomorphism. When a base
/// generator loop does not close at the basepoint coset, images are
/// reported for the cover's Schreier generators instead.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum GeneratorImages {
    BaseGenerators(Vec<FreeProductWord>),
    SchreierGenerators(Vec<FreeProductWord>),
}

/// An edge step of a loop in the 1-skeleton: (1-cell id, traversed against
/// orientation?).
pub type LoopStep = (usize, bool);

/// A verified largeness certificate: two disjoint regular mod-p cocycles on
/// a cover whose union is non-separating, with witness loops and the
/// epimorphism data.
#[derive(Clone, Debug)]
pub struct LargenessCertificate {
    pub p: u32,
    pub cover_canonical: String,
    pub cover_index: usize,
    pub d_set: Vec<usize>,
    pub cocycles: Vec<RegularModPCocycle>,
    pub witness_loops: Vec<Vec<LoopStep>>,
    pub generator_images: GeneratorImages,
    pub kernel_dims: (usize, usize),
}

/// Why a cut failed to certify.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct CutFailure {
    pub d_set: Vec<usize>,
    pub kernel_dim_a: usize,
    pub kernel_dim_b: usize,
    pub reason: String,
}

#[derive(Clone, Debug)]
pub enum CertifyOutcome {
    Certificate(Box<LargenessCertificate>),
    Failure(CutFailure),
}

/// Echelon-complement representatives of H¹(K; F_p): cocycles extending an
/// im δ⁰ basis to a basis of ker δ¹. Deterministic.
pub fn h1_representatives(k: &TwoComplex, p: u32) -> Vec<Vec<u32>> {
    let n1 = k.one_cells().len();
    let mut ech = Echelon::new(p, n1);
    for row in boundary1(k, p).row_basis() {
        ech.insert(&row);
    }
    let mut reps = Vec::new();
    for v in delta1(k, p).kernel_basis() {
        if ech.insert(&v) {
            reps.push(v);
        }
    }
    reps
}

/// Kernel of H¹(sub) → H¹(inter) where `inter` is a subcomplex of `sub`
/// (both given inside a common parent). Returns the H¹(sub) representative
/// cocycles (in sub-local coordinates) and the kernel coefficient vectors.
fn restriction_kernel(
    sub: &SubComplex,
    inter: &SubComplex,
    p: u32,
) -> Result<(crate::complexes::SubMaps, Vec<Vec<u32>>, Vec<Vec<u32>>)> {
    let (sub_complex, sub_maps) = sub.extract();
    let reps = h1_representatives(&sub_complex, p);
    let (inter_complex, inter_maps) = inter.extract();
    let n1_inter = inter_complex.one_cells().len();
    // restriction of each representative to inter's 1-cells
    let mut m_rows = Vec::with_capacity(reps.len());
    for rep in &reps {
        let row: Vec<u32> = inter_maps
            .one_map
            .iter()
            .map(|&parent_e| {
                let local = sub_maps.one_inv[parent_e];
                rep[local]
            })
            .collect();
        m_rows.push(row);
    }
    // independent basis of im δ⁰ on inter
    let d_rows = boundary1(&inter_complex, p).row_basis();
    let m = MatrixFp::from_rows(p, n1_inter, &m_rows)?;
    let d = MatrixFp::from_rows(p, n1_inter, &d_rows)?;
    let stacked = m.stack(&d)?;
    // left kernel of [M; D]: vectors (λ, μ) with λM + μD = 0; D independent
    // makes the λ-projection injective
    let kernel = stacked.transpose().kernel_basis();
    let lambdas: Vec<Vec<u32>> = kernel.iter().map(|v| v[..reps.len()].to_vec()).collect();
    Ok((sub_maps, reps, lambdas))
}

/// p^{d_p(C) − min(d_p(A), d_p(B))} for the vertex-cut decomposition: an
/// upper bound on the mod-p Cheeger constant h_p(K).
pub fn hp_upper_bound(k: &Arc<TwoComplex>, d_set: &[usize], p: u32) -> Result<Ratio<i64>> {
    check_prime(p)?;
    let (a, b, c) = cut_decomposition(k, d_set)?;
    let da = a.homology(p)?.d1 as i64;
    let db = b.homology(p)?.d1 as i64;
    let dc = c.homology(p)?.d1 as i64;
    prime_power_ratio(p, dc - da.min(db))
}

/// Run the kernel criterion on a cut and, if it holds, assemble the full
/// certificate: a non-separating regular cocycle in A∖C and one in B∖C,
/// the verified non-separating union, witness loops found by search in the
/// complement skeleton, and the epimorphism words.
pub fn certify_from_cut(
    t: &CosetTable,
    cover: &Arc<TwoComplex>,
    d_set: &[usize],
    p: u32,
) -> Result<CertifyOutcome> {
    check_prime(p)?;
    let (a, b, c) = cut_decomposition(cover, d_set)?;
    let (a_maps, a_reps, a_kernel) = restriction_kernel(&a, &c, p)?;
    let (b_maps, b_reps, b_kernel) = restriction_kernel(&b, &c, p)?;
    let dims = (a_kernel.len(), b_kernel.len());
    let fail = |reason: String| {
        Ok(CertifyOutcome::Failure(CutFailure {
            d_set: d_set.to_vec(),
            kernel_dim_a: dims.0,
            kernel_dim_b: dims.1,
            reason,
        }))
    };
    if dims.0 == 0 || dims.1 == 0 {
        return fail("a restriction kernel is trivial".into());
    }
    if p == 2 && dims.0.max(dims.1) < 2 {
        return fail("p = 2 needs a restriction kernel of dimension at least 2".into());
    }

    let build_side = |side: &SubComplex,
                      maps: &crate::complexes::SubMaps,
                      reps: &[Vec<u32>],
                      lambda: &[u32]|
     -> Result<Option<Cochain1>> {
        let (side_complex, _) = side.extract();
        let n1_local = side_complex.one_cells().len();
        let mut local = vec![0u32; n1_local];
        for (coeff, rep) in lambda.iter().zip(reps) {
            if *coeff == 0 {
                continue;
            }
            for (lv, rv) in local.iter_mut().zip(rep) {
                *lv = (*lv + crate::fplinalg::mul_mod(*coeff, *rv, p)) % p;
            }
        }
        // C as a subcomplex of the extracted side
        let side_arc = Arc::new(side_complex);
        let mut kz = vec![false; side_arc.zero_cells()];
        let mut ko = vec![false; side_arc.one_cells().len()];
        let mut kt = vec![false; side_arc.two_cells().len()];
        for v in c.kept_zero_indices() {
            kz[maps.zero_inv[v]] = true;
        }
        for e in c.kept_one_indices() {
            ko[maps.one_inv[e]] = true;
        }
        for f in c.kept_two_indices() {
            let local_f = maps
                .two_map
                .iter()
                .position(|&pf| pf == f)
                .expect("C 2-cell inside the side");
            kt[local_f] = true;
        }
        let c_in_side = SubComplex::new(Arc::clone(&side_arc), kz, ko, kt)?;
        match relative_nonseparating(&side_arc, &c_in_side, &Cochain1::new(p, local))? {
            NonseparatingOutcome::Cocycle { cochain, .. } => Ok(Some(cochain)),
            NonseparatingOutcome::TrivialClass { .. } => Ok(None),
        }
    };

    let Some(a_cochain) = build_side(&a, &a_maps, &a_reps, &a_kernel[0])? else {
        return fail("kernel class of A reduced to the trivial class".into());
    };
    let Some(b_cochain) = build_side(&b, &b_maps, &b_reps, &b_kernel[0])? else {
        return fail("kernel class of B reduced to the trivial class".into());
    };

    // extend both to cocycles on the whole cover (zero outside the side)
    let n1 = cover.one_cells().len();
    let lift = |maps: &crate::complexes::SubMaps, local: &Cochain1| {
        let mut values = vec![0u32; n1];
        for (li, &parent) in maps.one_map.iter().enumerate() {
            values[parent] = local.values()[li];
        }
        Cochain1::new(p, values)
    };
    let ca = lift(&a_maps, &a_cochain);
    let cb = lift(&b_maps, &b_cochain);
    let ga = regularize(cover, &ca)?;
    let gb = regularize(cover, &cb)?;
    let union = match ga.union(&gb) {
        Ok(u) => u,
        Err(e) => return fail(format!("cocycles are not disjoint: {e}")),
    };
    let dec = complement_components(cover, &union);
    if dec.component_count() != cover.component_count() {
        return fail("union of the two cocycles separates the cover".into());
    }

    let cocycles = vec![ga, gb];
    let mut witness_loops = Vec::new();
    for (i, g) in cocycles.iter().enumerate() {
        match single_crossing_loop(cover, &union, g) {
            Some(l) => witness_loops.push(l),
            None => {
                return fail(format!(
                    "no single-crossing witness loop for cocycle {i} in the complement skeleton"
                ))
            }
        }
    }
    let generator_images = epimorphism_images(t, &cocycles, p)?;
    Ok(CertifyOutcome::Certificate(Box::new(LargenessCertificate {
        p,
        cover_canonical: t.canonical_form(),
        cover_index: t.index(),
        d_set: d_set.to_vec(),
        cocycles,
        witness_loops,
        generator_images,
        kernel_dims: dims,
    })))
}

/// A loop crossing `target` exactly once and no other supported 1-cell of
/// `union`: a supported edge followed by a path through unsupported edges.
fn single_crossing_loop(
    k: &TwoComplex,
    union: &RegularModPCocycle,
    target: &RegularModPCocycle,
) -> Option<Vec<LoopStep>> {
    let n0 = k.zero_cells();
    let mut adjacency: Vec<Vec<(usize, usize, bool)>> = vec![Vec::new(); n0];
    for (e, &(t, h)) in k.one_cells().iter().enumerate() {
        if union.supports(e) {
            continue;
        }
        adjacency[t].push((h, e, false));
        adjacency[h].push((t, e, true));
    }
    for (&e, _) in target.weights() {
        let (tail, head) = k.one_cells()[e];
        // path head -> tail through the complement skeleton
        let mut parent: Vec<Option<(usize, usize, bool)>> = vec![None; n0];
        let mut seen = vec![false; n0];
        seen[head] = true;
        let mut queue = std::collections::VecDeque::from([head]);
        while let Some(v) = queue.pop_front() {
            if v == tail {
                break;
            }
            for &(w, edge, rev) in &adjacency[v] {
                if !seen[w] {
                    seen[w] = true;
                    parent[w] = Some((v, edge, rev));
                    queue.push_back(w);
                }
            }
        }
        if !seen[tail] {
            continue;
        }
        let mut path = Vec::new();
        let mut cur = tail;
        while cur != head {
            let (prev, edge, rev) = parent[cur].expect("bfs parent");
            path.push((edge, rev));
            cur = prev;
        }
        path.reverse();
        let mut l = vec![(e, false)];
        l.extend(path);
        return Some(l);
    }
    None
}

/// The crossing word of an edge loop: each traversal of a supported 1-cell
/// of cocycle i with weight w contributes the letter x_i^{±w}; adjacent
/// same-factor letters merge mod p.
pub fn crossing_word(
    cocycles: &[RegularModPCocycle],
    steps: &[LoopStep],
    p: u32,
) -> FreeProductWord {
    let mut word: FreeProductWord = Vec::new();
    for &(e, rev) in steps {
        for (i, g) in cocycles.iter().enumerate() {
            if let Some(&w) = g.weights().get(&e) {
                let exp = if rev { (p - w) % p } else { w };
                push_letter(&mut word, i, exp, p);
            }
        }
    }
    word
}

fn push_letter(word: &mut FreeProductWord, factor: usize, exp: u32, p: u32) {
    if exp % p == 0 {
        return;
    }
    if let Some(last) = word.last_mut() {
        if last.0 == factor {
            let merged = (last.1 + exp) % p;
            if merged == 0 {
                word.pop();
            } else {
                last.1 = merged;
            }
            return;
        }
    }
    word.push((factor, exp % p));
}

/// Check that an edge-step sequence is a closed path and return its
/// basepoint.
pub fn validate_loop(k: &TwoComplex, steps: &[LoopStep]) -> Result<usize> {
    if steps.is_empty() {
        return Err(Error::VerificationFailure("empty witness loop".into()));
    }
    let (e0, rev0) = steps[0];
    let start = if rev0 { k.one_cells()[e0].1 } else { k.one_cells()[e0].0 };
    let mut cur = start;
    for &(e, rev) in steps {
        let (t, h) = k.one_cells()[e];
        let (from, to) = if rev { (h, t) } else { (t, h) };
        if from != cur {
            return Err(Error::VerificationFailure("witness loop is not a path".into()));
        }
        cur = to;
    }
    if cur != start {
        return Err(Error::VerificationFailure("witness loop does not close".into()));
    }
    Ok(start)
}

/// Images of loops under the crossing-word readout. Base generator loops
/// are used when they close at the basepoint coset (index-1 covers);
/// otherwise the cover's Schreier generator loops are read instead.
pub fn epimorphism_images(
    t: &CosetTable,
    cocycles: &[RegularModPCocycle],
    p: u32,
) -> Result<GeneratorImages> {
    let index = t.index();
    let gens = t.generator_count();
    let closed_at_base = (0..gens).all(|g| t.action()[g][0] == 0);
    if closed_at_base {
        let mut words = Vec::with_capacity(gens);
        for g in 0..gens {
            let steps = vec![(g * index, false)];
            words.push(crossing_word(cocycles, &steps, p));
        }
        return Ok(GeneratorImages::BaseGenerators(words));
    }
    // Schreier generator loops: tree path to c, edge (c, g), tree path back
    let sys = SchreierSystem::new(t);
    let mut words = Vec::with_capacity(sys.generator_count());
    for c in 0..index {
        for g in 0..gens {
            if sys.edge_generator(c, g).is_none() {
                continue;
            }
            let mut steps = word_to_steps(t, 0, sys.transversal(c));
            steps.push((g * index + c, false));
            let target = t.action()[g][c] as usize;
            let back = sys.transversal(target).inverse();
            steps.extend(word_to_steps(t, target, &back));
            words.push(crossing_word(cocycles, &steps, p));
        }
    }
    Ok(GeneratorImages::SchreierGenerators(words))
}

/// Trace an ambient word from a coset, producing cover edge steps.
fn word_to_steps(t: &CosetTable, start: usize, w: &crate::words::Word) -> Vec<LoopStep> {
    let index = t.index();
    let mut steps = Vec::with_capacity(w.len());
    let mut c = start;
    for &l in w.letters() {
        if l.inverse {
            let from = t.inverse_action()[l.generator][c] as usize;
            steps.push((l.generator * index + from, true));
            c = from;
        } else {
            steps.push((l.generator * index + c, false));
            c = t.action()[l.generator][c] as usize;
        }
    }
    steps
}

/// Greedy subset of generators whose H₁(G; F_p) images form a basis.
pub fn homology_basis_labels(pres: &Presentation, p: u32) -> Result<Vec<usize>> {
    let gens = pres.generator_count();
    let mut ech = Echelon::new(p, gens);
    for row in abelianized_mod_p(pres, p)?.row_basis() {
        ech.insert(&row);
    }
    let mut labels = Vec::new();
    for g in 0..gens {
        let mut unit = vec![0u32; gens];
        unit[g] = 1;
        if ech.insert(&unit) {
            labels.push(g);
        }
    }
    Ok(labels)
}

fn check_basis_labels(pres: &Presentation, p: u32, labels: &[usize]) -> Result<()> {
    let gens = pres.generator_count();
    let mut ech = Echelon::new(p, gens);
    for row in abelianized_mod_p(pres, p)?.row_basis() {
        ech.insert(&row);
    }
    let dp = gens - ech.rank();
    if labels.len() != dp {
        return Err(Error::Input(format!(
            "basis_labels has {} generators but d_p(G) = {dp}",
            labels.len()
        )));
    }
    for &g in labels {
        if g >= gens {
            return Err(Error::Input(format!("label {g} out of range")));
        }
        let mut unit = vec![0u32; gens];
        unit[g] = 1;
        if !ech.insert(&unit) {
            return Err(Error::Input(
                "basis_labels do not map to a basis of H_1(G; F_p)".into(),
            ));
        }
    }
    Ok(())
}

/// The §5-style tallies and bounds for one vertex cut of one cover.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct CutDiagnostics {
    pub d_set: Vec<usize>,
    pub d_size: usize,
    pub boundary_size: usize,
    /// |∂D|/|D|
    pub h_value: Ratio<i64>,
    pub dp_a: usize,
    pub dp_b: usize,
    pub dp_c: usize,
    /// edges of Γ ∩ A with both endpoints in D
    pub type_i: usize,
    /// edges of Γ ∩ A lying in ∂D
    pub type_ii: usize,
    /// edges of Γ ∩ A in the boundary of a 2-cell meeting both sides
    pub type_iii: usize,
    pub bound_type_i: usize,
    pub bound_type_ii_iii: usize,
    pub c_vertex_count: usize,
    pub bound_c_vertices: usize,
    /// codim of Im H₁(Γ∩A) + Im H₁(Γ∩B) inside H₁(K_i)
    pub mv_codimension: usize,
    pub gamma_c_components: usize,
    pub hp_exponent: i64,
    pub bounds_hold: bool,
}

/// Edge-type tallies over Γ_i ∩ A, the three §-bounds, the Mayer–Vietoris
/// codimension bound and the h_p exponent for one cut.
pub fn cut_diagnostics(
    t: &CosetTable,
    cover: &Arc<TwoComplex>,
    d_set: &[usize],
    p: u32,
    basis_labels: &[usize],
) -> Result<CutDiagnostics> {
    check_prime(p)?;
    let pres = t.presentation();
    check_basis_labels(pres, p, basis_labels)?;
    let index = t.index();
    let gamma = labelled_subgraph(cover, index, basis_labels)?;
    let (a, b, c) = cut_decomposition(cover, d_set)?;

    let n0 = cover.zero_cells();
    let mut in_d = vec![false; n0];
    for &v in d_set {
        in_d[v] = true;
    }
    let d_size = in_d.iter().filter(|&&x| x).count();

    let boundary_size = cover
        .one_cells()
        .iter()
        .filter(|&&(u, v)| u != v && (in_d[u] != in_d[v]))
        .count();

    // 2-cells meeting both sides
    let mut both_sides = vec![false; cover.two_cells().len()];
    for (f, bw) in cover.two_cells().iter().enumerate() {
        let mut touches_d = false;
        let mut touches_dc = false;
        for &s in bw {
            if in_d[cover.step_from(s)] {
                touches_d = true;
            } else {
                touches_dc = true;
            }
        }
        both_sides[f] = touches_d && touches_dc;
    }
    let mut in_mixed_cell = vec![false; cover.one_cells().len()];
    for (f, bw) in cover.two_cells().iter().enumerate() {
        if both_sides[f] {
            for s in bw {
                in_mixed_cell[s.cell] = true;
            }
        }
    }

    let mut type_i = 0usize;
    let mut type_ii = 0usize;
    let mut type_iii = 0usize;
    for e in 0..cover.one_cells().len() {
        if !(gamma.keeps_one(e) && a.keeps_one(e)) {
            continue;
        }
        let (u, v) = cover.one_cells()[e];
        if in_d[u] && in_d[v] {
            type_i += 1;
        }
        if u != v && in_d[u] != in_d[v] {
            type_ii += 1;
        }
        if in_mixed_cell[e] {
            type_iii += 1;
        }
    }

    let dp_g = crate::words::dp(pres, p)?;
    let l = pres.total_relator_length();
    let bound_type_i = d_size * dp_g;
    let bound_type_ii_iii = boundary_size * (l * l + 1);
    let bound_c_vertices = boundary_size * (l * l + 2);

    let dp_a = a.homology(p)?.d1;
    let dp_b = b.homology(p)?.d1;
    let dp_c = c.homology(p)?.d1;
    let c_vertex_count = c.kept_zero_count();

    // Mayer–Vietoris: codim of Im H₁(Γ∩A) + Im H₁(Γ∩B) in H₁(K_i)
    let gamma_a = gamma.intersect(&a)?;
    let gamma_b = gamma.intersect(&b)?;
    let gamma_c = gamma.intersect(&c)?;
    let b1 = boundary1(cover, p);
    let dp_cover = cover.one_cells().len() - b1.rank() - boundary2(cover, p).rank();
    let mut ech = Echelon::new(p, cover.one_cells().len());
    let b2 = boundary2(cover, p);
    for col in 0..cover.two_cells().len() {
        let v: Vec<u32> = (0..cover.one_cells().len()).map(|r| b2.get(r, col)).collect();
        ech.insert(&v);
    }
    let rank_b2 = ech.rank();
    for v in crate::complexes::embedded_cycle_basis(&gamma_a, p) {
        ech.insert(&v);
    }
    for v in crate::complexes::embedded_cycle_basis(&gamma_b, p) {
        ech.insert(&v);
    }
    let image_dim = ech.rank() - rank_b2;
    let mv_codimension = dp_cover - image_dim;
    let gamma_c_components = crate::complexes::subcomplex_graph_components(&gamma_c);

    let bounds_hold = type_i <= bound_type_i
        && type_ii + type_iii <= bound_type_ii_iii
        && c_vertex_count <= bound_c_vertices
        && mv_codimension <= gamma_c_components
        && gamma_c_components <= c_vertex_count;

    Ok(CutDiagnostics {
        d_set: d_set.to_vec(),
        d_size,
        boundary_size,
        h_value: Ratio::new(boundary_size as i64, d_size as i64),
        dp_a,
        dp_b,
        dp_c,
        type_i,
        type_ii,
        type_iii,
        bound_type_i,
        bound_type_ii_iii,
        c_vertex_count,
        bound_c_vertices,
        mv_codimension,
        gamma_c_components,
        hp_exponent: dp_c as i64 - (dp_a.min(dp_b)) as i64,
        bounds_hold,
    })
}

/// Deterministic cut candidates for a cover: the exact or sweep Cheeger
/// witness plus BFS balls around every vertex.
pub fn cut_candidates(
    t: &CosetTable,
    cover: &Arc<TwoComplex>,
    subset_budget: usize,
) -> Result<Vec<Vec<usize>>> {
    let n = cover.zero_cells();
    let mut cuts: Vec<Vec<usize>> = Vec::new();
    let mut push = |cut: Vec<usize>| {
        if !cut.is_empty() && cut.len() < n && !cuts.contains(&cut) {
            cuts.push(cut);
        }
    };
    if n >= 2 {
        let x = crate::cosets::schreier_graph(t);
        let result = crate::expansion::cheeger_auto(&x, subset_budget)?;
        push(result.witness);
    }
    for center in 0..n {
        let mut prev = 0usize;
        for radius in 0.. {
            let ball = crate::complexes::bfs_ball(cover, center, radius);
            if ball.len() == prev || ball.len() > n / 2 || ball.len() == n {
                break;
            }
            prev = ball.len();
            push(ball);
        }
    }
    Ok(cuts)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::complexes::{covering_complex, presentation_complex};
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

    fn genus2() -> Arc<Presentation> {
        pres(
            &["a", "b", "c", "d"],
            &[&[(0, 1), (1, 1), (0, -1), (1, -1), (2, 1), (3, 1), (2, -1), (3, -1)]],
        )
    }

    fn torus_cover4() -> (CosetTable, Arc<TwoComplex>) {
        let p = torus();
        let gens = vec![
            Word::from_signed(&[(0, 1), (0, 1)]),
            Word::from_signed(&[(1, 1), (1, 1)]),
        ];
        let t = todd_coxeter(&p, &gens, 100).unwrap();
        let cover = Arc::new(covering_complex(&presentation_complex(&p), &t).unwrap());
        (t, cover)
    }

    #[test]
    fn hp_upper_bound_torus_re_evaluation() {
        let (_, cover) = torus_cover4();
        let d_set = vec![0, 1];
        let v = hp_upper_bound(&cover, &d_set, 2).unwrap();
        // re-evaluate straight from the definition
        let (a, b, c) = cut_decomposition(&cover, &d_set).unwrap();
        let e = c.homology(2).unwrap().d1 as i64
            - (a.homology(2).unwrap().d1.min(b.homology(2).unwrap().d1)) as i64;
        assert_eq!(v, crate::util::prime_power_ratio(2, e).unwrap());
        // the exponent is never negative for a torus cut: no certificate
        assert!(v >= Ratio::from_integer(1));
    }

    #[test]
    fn torus_cuts_always_fail() {
        let (t, cover) = torus_cover4();
        for d_set in cut_candidates(&t, &cover, 24).unwrap() {
            match certify_from_cut(&t, &cover, &d_set, 2).unwrap() {
                CertifyOutcome::Failure(f) => {
                    assert_eq!((f.kernel_dim_a, f.kernel_dim_b), (0, 0));
                }
                CertifyOutcome::Certificate(_) => {
                    panic!("torus cover certified large at cut {d_set:?}")
                }
            }
        }
    }

    #[test]
    fn f2_cover_certifies_p3() {
        // wedge of 2 circles, index-2 cover, p = 3
        let w = pres(&["a", "b"], &[]);
        let spec = FiniteQuotientSpec::new(&w, 2, vec![vec![1, 0], vec![0, 1]]).unwrap();
        let t = from_quotient(&w, &spec, 0).unwrap();
        let cover = Arc::new(covering_complex(&presentation_complex(&w), &t).unwrap());
        let mut certified = false;
        for d_set in cut_candidates(&t, &cover, 24).unwrap() {
            if let CertifyOutcome::Certificate(cert) =
                certify_from_cut(&t, &cover, &d_set, 3).unwrap()
            {
                certified = true;
                assert_eq!(cert.cocycles.len(), 2);
                // disjoint supports and star cells
                let u = cert.cocycles[0].union(&cert.cocycles[1]).unwrap();
                let dec = complement_components(&cover, &u);
                assert_eq!(dec.component_count(), cover.component_count());
                // witness loops close and have the right crossing words
                for (i, l) in cert.witness_loops.iter().enumerate() {
                    validate_loop(&cover, l).unwrap();
                    let word = crossing_word(&cert.cocycles, l, 3);
                    assert_eq!(word.len(), 1);
                    assert_eq!(word[0].0, i);
                    assert_ne!(word[0].1 % 3, 0);
                }
                break;
            }
        }
        assert!(certified, "no cut certified the F2 cover at p = 3");
    }

    #[test]
    fn genus2_cover_certifies_p2() {
        let g2 = genus2();
        let spec = FiniteQuotientSpec::new(&g2, 2, vec![vec![1, 0]; 4]).unwrap();
        let t = from_quotient(&g2, &spec, 0).unwrap();
        let cover = Arc::new(covering_complex(&presentation_complex(&g2), &t).unwrap());
        let mut certified = false;
        for d_set in cut_candidates(&t, &cover, 24).unwrap() {
            if let CertifyOutcome::Certificate(cert) =
                certify_from_cut(&t, &cover, &d_set, 2).unwrap()
            {
                certified = true;
                assert!(cert.kernel_dims.0.max(cert.kernel_dims.1) >= 2);
                break;
            }
        }
        assert!(certified, "no cut certified the genus-2 cover at p = 2");
    }

    #[test]
    fn epimorphism_image_examples() {
        // trivial cover of the wedge: base generator loops close
        let w = pres(&["a", "b"], &[]);
        let t = CosetTable::trivial(Arc::clone(&w));
        let cover = Arc::new(covering_complex(&presentation_complex(&w), &t).unwrap());
        let ga = regularize(&cover, &Cochain1::from_support(3, 2, &[(0, 2)])).unwrap();
        let gb = regularize(&cover, &Cochain1::from_support(3, 2, &[(1, 1)])).unwrap();
        match epimorphism_images(&t, &[ga, gb], 3).unwrap() {
            GeneratorImages::BaseGenerators(words) => {
                assert_eq!(words, vec![vec![(0, 2)], vec![(1, 1)]]);
            }
            other => panic!("expected base generators, got {other:?}"),
        }
    }

    #[test]
    fn crossing_word_merges_adjacent_letters() {
        let w = pres(&["a", "b"], &[]);
        let cover =
            Arc::new(covering_complex(&presentation_complex(&w), &CosetTable::trivial(w.clone())).unwrap());
        let g = regularize(&cover, &Cochain1::from_support(3, 2, &[(0, 1)])).unwrap();
        // a then a again: exponents add; a then a backwards: cancels
        let word = crossing_word(&[g.clone()], &[(0, false), (0, false)], 3);
        assert_eq!(word, vec![(0, 2)]);
        let word = crossing_word(&[g], &[(0, false), (0, true)], 3);
        assert!(word.is_empty());
    }

    #[test]
    fn cut_diagnostics_bounds_on_f2_cover() {
        let w = pres(&["a", "b"], &[]);
        let spec = FiniteQuotientSpec::new(&w, 4, vec![vec![1, 2, 3, 0], vec![0, 1, 2, 3]]).unwrap();
        let t = from_quotient(&w, &spec, 0).unwrap();
        let cover = Arc::new(covering_complex(&presentation_complex(&w), &t).unwrap());
        let labels = homology_basis_labels(&w, 2).unwrap();
        assert_eq!(labels, vec![0, 1]);
        for d_set in cut_candidates(&t, &cover, 24).unwrap() {
            let d = cut_diagnostics(&t, &cover, &d_set, 2, &labels).unwrap();
            assert!(d.bounds_hold, "bounds violated at {d_set:?}: {d:?}");
            // no 2-cells: type (iii) empty
            assert_eq!(d.type_iii, 0);
        }
    }

    #[test]
    fn cut_diagnostics_mv_bound_on_torus_cover() {
        let (t, cover) = torus_cover4();
        let labels = homology_basis_labels(t.presentation(), 3).unwrap();
        for d_set in cut_candidates(&t, &cover, 24).unwrap() {
            let d = cut_diagnostics(&t, &cover, &d_set, 3, &labels).unwrap();
            assert!(d.bounds_hold, "bounds violated at {d_set:?}: {d:?}");
            assert!(d.mv_codimension <= d.c_vertex_count);
        }
    }

    #[test]
    fn bad_basis_labels_rejected() {
        let (t, cover) = torus_cover4();
        let err = cut_diagnostics(&t, &cover, &[0, 1], 2, &[0]);
        assert!(err.is_err());
    }

    #[test]
    fn hp_below_half_implies_certificate() {
        // sweep the genus-2 index-2 cover; whenever the exponent criterion
        // signals, certify_from_cut must succeed (Cor 3.8 direction)
        let g2 = genus2();
        let spec = FiniteQuotientSpec::new(&g2, 2, vec![vec![1, 0]; 4]).unwrap();
        let t = from_quotient(&g2, &spec, 0).unwrap();
        let cover = Arc::new(covering_complex(&presentation_complex(&g2), &t).unwrap());
        for d_set in cut_candidates(&t, &cover, 24).unwrap() {
            let bound = hp_upper_bound(&cover, &d_set, 2).unwrap();
            if bound < Ratio::new(1, 2) {
                match certify_from_cut(&t, &cover, &d_set, 2).unwrap() {
                    CertifyOutcome::Certificate(_) => {}
                    CertifyOutcome::Failure(f) => {
                        panic!("h_p bound {bound} below 1/2 but certification failed: {f:?}")
                    }
                }
            }
        }
    }
}
