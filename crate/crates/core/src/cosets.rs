//! Finite-index subgroups as coset tables: Todd–Coxeter enumeration,
//! Schreier coset graphs, Reidemeister–Schreier subgroup presentations,
//! kernels of mod-p epimorphisms, canonical forms and subnormal chains.
//!
//! Cosets are right cosets Hg with the group acting on the right; coset 0
//! is the subgroup itself. All constructions number cosets deterministically
//! so identical inputs yield identical tables.

use std::collections::VecDeque;
use std::sync::Arc;

use crate::fplinalg::MatrixFp;
use crate::words::{check_prime, Letter, Presentation, Word};
use crate::{Error, Result};

/// A finite-index subgroup, stored as the permutation action of the
/// generators on its cosets, with the subgroup at coset 0.
#[derive(Clone, Debug)]
pub struct CosetTable {
    presentation: Arc<Presentation>,
    index: usize,
    /// action[g][c] = c · g
    action: Vec<Vec<u32>>,
    /// inverse_action[g][c · g] = c
    inverse_action: Vec<Vec<u32>>,
}

impl PartialEq for CosetTable {
    fn eq(&self, other: &Self) -> bool {
        self.same_ambient(other) && self.canonical_form() == other.canonical_form()
    }
}
impl Eq for CosetTable {}

impl CosetTable {
    /// Build from an explicit action, validating the table invariants:
    /// bijective generator actions, relator closure at every coset, and
    /// transitivity from the basepoint.
    pub fn from_action(presentation: Arc<Presentation>, action: Vec<Vec<u32>>) -> Result<Self> {
        let gens = presentation.generator_count();
        if action.len() != gens {
            return Err(Error::Input(format!(
                "expected {gens} generator actions, got {}",
                action.len()
            )));
        }
        let index = action.first().map_or(0, |a| a.len());
        if index == 0 {
            return Err(Error::Input("coset table needs at least one coset".into()));
        }
        let mut inverse_action = Vec::with_capacity(gens);
        for (g, perm) in action.iter().enumerate() {
            if perm.len() != index {
                return Err(Error::Input(format!(
                    "generator {g} acts on {} cosets, expected {index}",
                    perm.len()
                )));
            }
            let mut inv = vec![u32::MAX; index];
            for (c, &img) in perm.iter().enumerate() {
                if img as usize >= index || inv[img as usize] != u32::MAX {
                    return Err(Error::Input(format!(
                        "generator {g} does not act as a bijection"
                    )));
                }
                inv[img as usize] = c as u32;
            }
            inverse_action.push(inv);
        }
        let table = CosetTable { presentation, index, action, inverse_action };
        table.validate()?;
        Ok(table)
    }

    /// The whole group as an index-1 subgroup of itself.
    pub fn trivial(presentation: Arc<Presentation>) -> Self {
        let gens = presentation.generator_count();
        CosetTable {
            presentation,
            index: 1,
            action: vec![vec![0]; gens],
            inverse_action: vec![vec![0]; gens],
        }
    }

    fn validate(&self) -> Result<()> {
        for (i, r) in self.presentation.relators().iter().enumerate() {
            for c in 0..self.index {
                if self.trace(c, r) != c {
                    return Err(Error::Input(format!(
                        "relator {i} does not close at coset {c}"
                    )));
                }
            }
        }
        // transitivity from the basepoint
        let mut seen = vec![false; self.index];
        let mut queue = VecDeque::from([0usize]);
        seen[0] = true;
        let mut count = 1;
        while let Some(c) = queue.pop_front() {
            for g in 0..self.generator_count() {
                for n in [self.action[g][c] as usize, self.inverse_action[g][c] as usize] {
                    if !seen[n] {
                        seen[n] = true;
                        count += 1;
                        queue.push_back(n);
                    }
                }
            }
        }
        if count != self.index {
            return Err(Error::Input("coset action is not transitive".into()));
        }
        Ok(())
    }

    pub fn presentation(&self) -> &Arc<Presentation> {
        &self.presentation
    }

    pub fn index(&self) -> usize {
        self.index
    }

    pub fn generator_count(&self) -> usize {
        self.presentation.generator_count()
    }

    pub fn same_ambient(&self, other: &CosetTable) -> bool {
        Arc::ptr_eq(&self.presentation, &other.presentation)
            || *self.presentation == *other.presentation
    }

    pub fn apply(&self, c: usize, l: Letter) -> usize {
        if l.inverse {
            self.inverse_action[l.generator][c] as usize
        } else {
            self.action[l.generator][c] as usize
        }
    }

    pub fn trace(&self, start: usize, w: &Word) -> usize {
        w.letters().iter().fold(start, |c, &l| self.apply(c, l))
    }

    pub fn action(&self) -> &[Vec<u32>] {
        &self.action
    }

    /// Canonical byte string: BFS renumbering from the basepoint with fixed
    /// generator order, serialized as `index|row|row|…` with rows
    /// comma-separated (one row per generator). Equal strings iff equal
    /// subgroups of the same presentation.
    pub fn canonical_form(&self) -> String {
        let perm = self.bfs_renumbering();
        let mut out = format!("{}", self.index);
        for g in 0..self.generator_count() {
            out.push('|');
            let mut row = vec![0u32; self.index];
            for c in 0..self.index {
                row[perm[c] as usize] = perm[self.action[g][c] as usize];
            }
            let cells: Vec<String> = row.iter().map(|x| x.to_string()).collect();
            out.push_str(&cells.join(","));
        }
        out
    }

    /// perm[old] = new, BFS from basepoint, visiting g then g⁻¹ edges in
    /// generator order.
    fn bfs_renumbering(&self) -> Vec<u32> {
        let mut perm = vec![u32::MAX; self.index];
        perm[0] = 0;
        let mut next = 1u32;
        let mut queue = VecDeque::from([0usize]);
        while let Some(c) = queue.pop_front() {
            for g in 0..self.generator_count() {
                for n in [self.action[g][c] as usize, self.inverse_action[g][c] as usize] {
                    if perm[n] == u32::MAX {
                        perm[n] = next;
                        next += 1;
                        queue.push_back(n);
                    }
                }
            }
        }
        perm
    }

    /// Rebuild a table from its canonical form string (used by certificate
    /// verification, which must re-derive everything from the report).
    pub fn from_canonical_form(presentation: Arc<Presentation>, s: &str) -> Result<Self> {
        let mut parts = s.split('|');
        let index: usize = parts
            .next()
            .ok_or_else(|| Error::Input("empty canonical form".into()))?
            .parse()
            .map_err(|_| Error::Input("bad index in canonical form".into()))?;
        let mut action = Vec::new();
        for part in parts {
            let row: std::result::Result<Vec<u32>, _> =
                part.split(',').map(|x| x.parse::<u32>()).collect();
            let row = row.map_err(|_| Error::Input("bad row in canonical form".into()))?;
            if row.len() != index {
                return Err(Error::Input("row length mismatch in canonical form".into()));
            }
            action.push(row);
        }
        CosetTable::from_action(presentation, action)
    }
}

/// Schreier coset graph X(G/H; S): one vertex per coset, one labeled edge
/// (c, c·s, s) per coset and generator. Loops and parallel edges allowed.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SchreierGraph {
    pub vertex_count: usize,
    /// Edges in generator-major order: edge g·index + c is (c, c·g, g).
    pub edges: Vec<(usize, usize, usize)>,
}

impl SchreierGraph {
    pub fn new(vertex_count: usize, edges: Vec<(usize, usize, usize)>) -> Self {
        SchreierGraph { vertex_count, edges }
    }

    /// Degree of each vertex; a loop contributes 2.
    pub fn degrees(&self) -> Vec<usize> {
        let mut d = vec![0usize; self.vertex_count];
        for &(u, v, _) in &self.edges {
            d[u] += 1;
            d[v] += 1;
        }
        d
    }

    pub fn is_connected(&self) -> bool {
        if self.vertex_count == 0 {
            return true;
        }
        let mut uf = crate::util::UnionFind::new(self.vertex_count);
        for &(u, v, _) in &self.edges {
            uf.union(u, v);
        }
        uf.component_count() == 1
    }
}

/// The Schreier coset graph of a table.
pub fn schreier_graph(t: &CosetTable) -> SchreierGraph {
    let mut edges = Vec::with_capacity(t.generator_count() * t.index());
    for g in 0..t.generator_count() {
        for c in 0..t.index() {
            edges.push((c, t.action()[g][c] as usize, g));
        }
    }
    SchreierGraph::new(t.index(), edges)
}

// ---------------------------------------------------------------------------
// Todd–Coxeter (HLT with lookahead collapses)
// ---------------------------------------------------------------------------

struct Enumerator {
    ncols: usize,
    table: Vec<Vec<Option<u32>>>,
    rep: Vec<u32>,
    live: usize,
    max_live: usize,
    max_total: usize,
}

fn word_cols(w: &Word) -> Vec<usize> {
    w.letters().iter().map(|l| 2 * l.generator + l.inverse as usize).collect()
}

impl Enumerator {
    fn new(gens: usize, max_cosets: usize) -> Self {
        Enumerator {
            ncols: 2 * gens,
            table: vec![vec![None; 2 * gens]],
            rep: vec![0],
            live: 1,
            max_live: max_cosets,
            max_total: max_cosets.saturating_mul(2).max(max_cosets + 1024),
        }
    }

    fn find(&mut self, c: u32) -> u32 {
        let mut root = c;
        while self.rep[root as usize] != root {
            root = self.rep[root as usize];
        }
        let mut cur = c;
        while self.rep[cur as usize] != root {
            let next = self.rep[cur as usize];
            self.rep[cur as usize] = root;
            cur = next;
        }
        root
    }

    fn is_live(&mut self, c: u32) -> bool {
        self.find(c) == c
    }

    fn define(&mut self, c: u32, col: usize) -> Result<u32> {
        if self.live >= self.max_live {
            return Err(Error::BudgetExceeded {
                stage: "todd_coxeter",
                detail: format!("live coset count reached the cap of {}", self.max_live),
            });
        }
        if self.table.len() >= self.max_total {
            return Err(Error::BudgetExceeded {
                stage: "todd_coxeter",
                detail: format!("total defined cosets reached {}", self.max_total),
            });
        }
        let fresh = self.table.len() as u32;
        self.table.push(vec![None; self.ncols]);
        self.rep.push(fresh);
        self.live += 1;
        self.table[c as usize][col] = Some(fresh);
        self.table[fresh as usize][col ^ 1] = Some(c);
        Ok(fresh)
    }

    fn merge(&mut self, a: u32, b: u32, queue: &mut VecDeque<u32>) {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra == rb {
            return;
        }
        let (keep, kill) = (ra.min(rb), ra.max(rb));
        self.rep[kill as usize] = keep;
        self.live -= 1;
        queue.push_back(kill);
    }

    fn coincidence(&mut self, a: u32, b: u32) {
        let mut queue = VecDeque::new();
        self.merge(a, b, &mut queue);
        while let Some(gamma) = queue.pop_front() {
            for col in 0..self.ncols {
                let Some(delta) = self.table[gamma as usize][col].take() else {
                    continue;
                };
                self.table[delta as usize][col ^ 1] = None;
                let mu = self.find(gamma);
                let nu = self.find(delta);
                if let Some(t) = self.table[mu as usize][col] {
                    self.merge(nu, t, &mut queue);
                } else if let Some(t) = self.table[nu as usize][col ^ 1] {
                    self.merge(mu, t, &mut queue);
                } else {
                    self.table[mu as usize][col] = Some(nu);
                    self.table[nu as usize][col ^ 1] = Some(mu);
                }
            }
        }
    }

    /// Scan `cols` as a cycle at coset c, defining cosets to fill gaps.
    fn scan_and_fill(&mut self, c: u32, cols: &[usize]) -> Result<()> {
        if cols.is_empty() {
            return Ok(());
        }
        loop {
            let c = self.find(c);
            // forward
            let mut f = c;
            let mut i = 0;
            while i < cols.len() {
                match self.table[f as usize][cols[i]] {
                    Some(next) => {
                        f = self.find(next);
                        i += 1;
                    }
                    None => break,
                }
            }
            if i == cols.len() {
                if f != c {
                    self.coincidence(f, c);
                }
                return Ok(());
            }
            // backward
            let mut b = c;
            let mut j = cols.len();
            while j > i {
                match self.table[b as usize][cols[j - 1] ^ 1] {
                    Some(prev) => {
                        b = self.find(prev);
                        j -= 1;
                    }
                    None => break,
                }
            }
            if j == i + 1 {
                // gap of one: deduction closes the cycle
                self.table[f as usize][cols[i]] = Some(b);
                self.table[b as usize][cols[i] ^ 1] = Some(f);
                return Ok(());
            }
            if j == i {
                // scan met in the middle with a mismatch
                self.coincidence(f, b);
                continue;
            }
            self.define(f, cols[i])?;
        }
    }

    /// Lookahead: scan everything without defining, harvesting deductions
    /// and coincidences to free space.
    fn lookahead(&mut self, relator_cols: &[Vec<usize>]) {
        let mut c = 0u32;
        while (c as usize) < self.table.len() {
            if self.is_live(c) {
                for cols in relator_cols {
                    self.scan_no_fill(c, cols);
                    if !self.is_live(c) {
                        break;
                    }
                }
            }
            c += 1;
        }
    }

    fn scan_no_fill(&mut self, c: u32, cols: &[usize]) {
        if cols.is_empty() {
            return;
        }
        let c = self.find(c);
        let mut f = c;
        let mut i = 0;
        while i < cols.len() {
            match self.table[f as usize][cols[i]] {
                Some(next) => {
                    f = self.find(next);
                    i += 1;
                }
                None => break,
            }
        }
        if i == cols.len() {
            if f != c {
                self.coincidence(f, c);
            }
            return;
        }
        let mut b = c;
        let mut j = cols.len();
        while j > i {
            match self.table[b as usize][cols[j - 1] ^ 1] {
                Some(prev) => {
                    b = self.find(prev);
                    j -= 1;
                }
                None => break,
            }
        }
        if j == i + 1 {
            self.table[f as usize][cols[i]] = Some(b);
            self.table[b as usize][cols[i] ^ 1] = Some(f);
        } else if j == i {
            self.coincidence(f, b);
        }
    }
}

/// Coset enumeration for the subgroup of G = ⟨S | R⟩ generated by
/// `subgroup_gens`. HLT strategy with lookahead collapses; deterministic
/// coset numbering by first definition. Never returns a partial table:
/// exceeding the budget is an error.
pub fn todd_coxeter(
    presentation: &Arc<Presentation>,
    subgroup_gens: &[Word],
    max_cosets: usize,
) -> Result<CosetTable> {
    if max_cosets < 1 {
        return Err(Error::Input("max_cosets must be at least 1".into()));
    }
    for (i, w) in subgroup_gens.iter().enumerate() {
        if let Some(g) = w.max_generator() {
            if g >= presentation.generator_count() {
                return Err(Error::Input(format!(
                    "subgroup generator {i} uses generator index {g} out of range"
                )));
            }
        }
    }
    let gens = presentation.generator_count();
    let mut e = Enumerator::new(gens, max_cosets);
    let relator_cols: Vec<Vec<usize>> =
        presentation.relators().iter().map(word_cols).collect();
    let subgroup_cols: Vec<Vec<usize>> = subgroup_gens
        .iter()
        .map(|w| word_cols(&w.free_reduce()))
        .collect();

    for cols in &subgroup_cols {
        e.scan_and_fill(0, cols)?;
    }

    let mut scanned_upto = 0u32;
    loop {
        while (scanned_upto as usize) < e.table.len() {
            let c = scanned_upto;
            if e.is_live(c) {
                for cols in &relator_cols {
                    match e.scan_and_fill(c, cols) {
                        Ok(()) => {}
                        Err(Error::BudgetExceeded { .. }) => {
                            e.lookahead(&relator_cols);
                            e.scan_and_fill(c, cols)?;
                        }
                        Err(other) => return Err(other),
                    }
                    if !e.is_live(c) {
                        break;
                    }
                }
            }
            scanned_upto += 1;
        }
        // fill remaining holes (generators untouched by any scan)
        let mut defined_any = false;
        let mut c = 0u32;
        while (c as usize) < e.table.len() {
            if e.is_live(c) {
                for col in 0..e.ncols {
                    if e.table[c as usize][col].is_none() {
                        match e.define(c, col) {
                            Ok(_) => defined_any = true,
                            Err(Error::BudgetExceeded { .. }) => {
                                e.lookahead(&relator_cols);
                                e.define(c, col)?;
                                defined_any = true;
                            }
                            Err(other) => return Err(other),
                        }
                    }
                }
            }
            c += 1;
        }
        if !defined_any {
            break;
        }
    }

    // compress to live cosets, in first-definition order
    let total = e.table.len();
    let mut renumber = vec![u32::MAX; total];
    let mut live_list = Vec::new();
    for c in 0..total as u32 {
        if e.is_live(c) {
            renumber[c as usize] = live_list.len() as u32;
            live_list.push(c);
        }
    }
    let index = live_list.len();
    let mut action = vec![vec![0u32; index]; gens];
    for (new_c, &old_c) in live_list.iter().enumerate() {
        for g in 0..gens {
            let img = e.table[old_c as usize][2 * g]
                .ok_or_else(|| Error::Input("incomplete coset table after enumeration".into()))?;
            let img = e.find(img);
            action[g][new_c] = renumber[img as usize];
        }
    }
    CosetTable::from_action(Arc::clone(presentation), action)
}

/// Coset table of the stabilizer of `point` under a finite quotient action;
/// the index is the orbit size.
pub fn from_quotient(
    presentation: &Arc<Presentation>,
    spec: &crate::words::FiniteQuotientSpec,
    point: usize,
) -> Result<CosetTable> {
    if point >= spec.degree() {
        return Err(Error::Input(format!(
            "point {point} outside the action degree {}",
            spec.degree()
        )));
    }
    let gens = presentation.generator_count();
    // BFS orbit of the point, renumbered with the basepoint first.
    let mut number = vec![usize::MAX; spec.degree()];
    number[point] = 0;
    let mut orbit = vec![point];
    let mut queue = VecDeque::from([point]);
    while let Some(x) = queue.pop_front() {
        for g in 0..gens {
            for inverse in [false, true] {
                let y = spec.apply(x, Letter::new(g, inverse));
                if number[y] == usize::MAX {
                    number[y] = orbit.len();
                    orbit.push(y);
                    queue.push_back(y);
                }
            }
        }
    }
    let index = orbit.len();
    let mut action = vec![vec![0u32; index]; gens];
    for (c, &x) in orbit.iter().enumerate() {
        for g in 0..gens {
            action[g][c] = number[spec.apply(x, Letter::new(g, false))] as u32;
        }
    }
    CosetTable::from_action(Arc::clone(presentation), action)
}

// ---------------------------------------------------------------------------
// Reidemeister–Schreier
// ---------------------------------------------------------------------------

/// Spanning-tree data for a coset table: transversal words, Schreier
/// generators (one per non-tree edge) and the rewriting map.
pub struct SchreierSystem {
    /// tree[g][c] is true when edge (c, c·g, g) lies in the BFS tree.
    tree: Vec<Vec<bool>>,
    /// Schreier generator index of each non-tree edge, coset-major.
    edge_generator: Vec<Vec<Option<usize>>>,
    transversal: Vec<Word>,
    generator_count: usize,
}

impl SchreierSystem {
    pub fn new(t: &CosetTable) -> Self {
        let gens = t.generator_count();
        let index = t.index();
        let mut tree = vec![vec![false; index]; gens];
        let mut transversal: Vec<Option<Word>> = vec![None; index];
        transversal[0] = Some(Word::empty());
        let mut queue = VecDeque::from([0usize]);
        while let Some(c) = queue.pop_front() {
            for g in 0..gens {
                let fwd = t.action()[g][c] as usize;
                if transversal[fwd].is_none() {
                    tree[g][c] = true;
                    let mut w = transversal[c].clone().unwrap();
                    w.push(Letter::new(g, false));
                    transversal[fwd] = Some(w);
                    queue.push_back(fwd);
                }
                let bwd = t.inverse_action()[g][c] as usize;
                if transversal[bwd].is_none() {
                    // tree edge (bwd, c, g), discovered backwards
                    tree[g][bwd] = true;
                    let mut w = transversal[c].clone().unwrap();
                    w.push(Letter::new(g, true));
                    transversal[bwd] = Some(w);
                    queue.push_back(bwd);
                }
            }
        }
        let mut edge_generator = vec![vec![None; index]; gens];
        let mut next = 0usize;
        for c in 0..index {
            for (g, tree_row) in tree.iter().enumerate() {
                if !tree_row[c] {
                    edge_generator[g][c] = Some(next);
                    next += 1;
                }
            }
        }
        SchreierSystem {
            tree,
            edge_generator,
            transversal: transversal.into_iter().map(|w| w.unwrap()).collect(),
            generator_count: next,
        }
    }

    pub fn generator_count(&self) -> usize {
        self.generator_count
    }

    pub fn transversal(&self, c: usize) -> &Word {
        &self.transversal[c]
    }

    pub fn is_tree_edge(&self, c: usize, g: usize) -> bool {
        self.tree[g][c]
    }

    pub fn edge_generator(&self, c: usize, g: usize) -> Option<usize> {
        self.edge_generator[g][c]
    }

    /// The Schreier generator for a non-tree edge, as a word in the ambient
    /// generators: u_c · g · u_{c·g}⁻¹.
    pub fn schreier_generator_word(&self, t: &CosetTable, c: usize, g: usize) -> Word {
        let target = t.action()[g][c] as usize;
        let mut w = self.transversal[c].clone();
        w.push(Letter::new(g, false));
        w.concat(&self.transversal[target].inverse()).free_reduce()
    }

    /// All Schreier generator words, in generator-index order.
    pub fn schreier_generator_words(&self, t: &CosetTable) -> Vec<Word> {
        let mut out = vec![Word::empty(); self.generator_count];
        for c in 0..t.index() {
            for g in 0..t.generator_count() {
                if let Some(k) = self.edge_generator[g][c] {
                    out[k] = self.schreier_generator_word(t, c, g);
                }
            }
        }
        out
    }

    /// Rewrite an ambient word traced from `start` as a word in the
    /// Schreier generators.
    pub fn rewrite(&self, t: &CosetTable, start: usize, w: &Word) -> Word {
        let mut out = Word::empty();
        let mut c = start;
        for &l in w.letters() {
            if l.inverse {
                let from = t.inverse_action()[l.generator][c] as usize;
                if let Some(k) = self.edge_generator[l.generator][from] {
                    out.push(Letter::new(k, true));
                }
                c = from;
            } else {
                if let Some(k) = self.edge_generator[l.generator][c] {
                    out.push(Letter::new(k, false));
                }
                c = t.action()[l.generator][c] as usize;
            }
        }
        out
    }
}

impl CosetTable {
    pub fn inverse_action(&self) -> &[Vec<u32>] {
        &self.inverse_action
    }
}

/// Reidemeister–Schreier presentation of the subgroup: generators are the
/// non-tree edges of a BFS spanning tree of the Schreier graph (there are
/// index·|S| − index + 1 of them), relators are the rewritten relator
/// traces from every coset.
pub fn reidemeister_schreier(t: &CosetTable) -> Result<Presentation> {
    let sys = SchreierSystem::new(t);
    rs_presentation(t, &sys)
}

fn rs_presentation(t: &CosetTable, sys: &SchreierSystem) -> Result<Presentation> {
    let names: Vec<String> = {
        let mut names = vec![String::new(); sys.generator_count()];
        for c in 0..t.index() {
            for g in 0..t.generator_count() {
                if let Some(k) = sys.edge_generator(c, g) {
                    names[k] = format!("{}.{}", t.presentation().generator_names()[g], c);
                }
            }
        }
        names
    };
    let mut relators = Vec::new();
    for c in 0..t.index() {
        for r in t.presentation().relators() {
            let w = sys.rewrite(t, c, r).free_reduce().cyclic_reduce();
            if !w.is_empty() {
                relators.push(w);
            }
        }
    }
    Presentation::new(names, relators)
}

/// d_p of the subgroup represented by a table, via the Reidemeister–Schreier
/// presentation and mod-p abelianization.
pub fn subgroup_dp(t: &CosetTable, p: u32) -> Result<usize> {
    let pres = reidemeister_schreier(t)?;
    crate::words::dp(&pres, p)
}

/// The kernels of all nontrivial homomorphisms H → Z/pZ, where H is the
/// subgroup of `t`, returned as coset tables over the ambient group. There
/// are exactly (p^{d_p(H)} − 1)/(p − 1) of them; each has index p·[G:H] and
/// is normal in H.
pub fn index_p_normal_subgroups(t: &CosetTable, p: u32) -> Result<Vec<CosetTable>> {
    check_prime(p)?;
    let sys = SchreierSystem::new(t);
    let k = sys.generator_count();
    // Constraint matrix: one row per rewritten relator; homomorphisms to
    // F_p are exactly the right kernel.
    let mut rows = Vec::new();
    for c in 0..t.index() {
        for r in t.presentation().relators() {
            let w = sys.rewrite(t, c, r);
            let row: Vec<u32> = w
                .exponent_sums(k)
                .into_iter()
                .map(|s| s.rem_euclid(p as i64) as u32)
                .collect();
            rows.push(row);
        }
    }
    let constraints = MatrixFp::from_rows(p, k, &rows)?;
    let basis = constraints.kernel_basis();
    let d = basis.len();
    let mut out = Vec::new();
    for lambda in projective_points(p, d) {
        // φ = Σ λ_i basis_i over the Schreier generators
        let mut phi = vec![0u32; k];
        for (i, l) in lambda.iter().enumerate() {
            if *l == 0 {
                continue;
            }
            for (j, phi_j) in phi.iter_mut().enumerate() {
                *phi_j = (*phi_j + l * basis[i][j]) % p;
            }
        }
        out.push(kernel_table(t, &sys, p, &phi)?);
    }
    Ok(out)
}

/// All nonzero vectors of F_p^d with first nonzero coordinate 1, in
/// lexicographic order of (leading index, remaining digits).
fn projective_points(p: u32, d: usize) -> Vec<Vec<u32>> {
    let mut out = Vec::new();
    for lead in 0..d {
        let tail = d - lead - 1;
        let mut digits = vec![0u32; tail];
        loop {
            let mut v = vec![0u32; d];
            v[lead] = 1;
            v[lead + 1..].copy_from_slice(&digits);
            out.push(v);
            // odometer
            let mut i = tail;
            loop {
                if i == 0 {
                    break;
                }
                digits[i - 1] += 1;
                if digits[i - 1] < p {
                    break;
                }
                digits[i - 1] = 0;
                i -= 1;
            }
            if i == 0 {
                break;
            }
        }
    }
    out
}

/// Coset table of ker φ ≤ H as a subgroup of G. Cosets of the kernel
/// correspond to pairs (coset of H, value in F_p); the generator action is
/// (c, z) ↦ (c·g, z + φ(schreier generator of the edge)).
fn kernel_table(
    t: &CosetTable,
    sys: &SchreierSystem,
    p: u32,
    phi: &[u32],
) -> Result<CosetTable> {
    let index = t.index();
    let gens = t.generator_count();
    let new_index = index * p as usize;
    let mut action = vec![vec![0u32; new_index]; gens];
    for g in 0..gens {
        for c in 0..index {
            let target = t.action()[g][c] as usize;
            let w = sys.edge_generator(c, g).map_or(0, |k| phi[k]);
            for z in 0..p as usize {
                let z2 = (z + w as usize) % p as usize;
                action[g][c * p as usize + z] = (target * p as usize + z2) as u32;
            }
        }
    }
    CosetTable::from_action(Arc::clone(t.presentation()), action)
}

/// Coset-map refinement: true iff the subgroup of `inner` is contained in
/// the subgroup of `outer`.
pub fn is_subgroup_of(inner: &CosetTable, outer: &CosetTable) -> Result<bool> {
    if !inner.same_ambient(outer) {
        return Err(Error::AmbientMismatch);
    }
    let gens = inner.generator_count();
    let mut map = vec![u32::MAX; inner.index()];
    map[0] = 0;
    let mut queue = VecDeque::from([0usize]);
    while let Some(c) = queue.pop_front() {
        for g in 0..gens {
            for inverse in [false, true] {
                let l = Letter::new(g, inverse);
                let ci = inner.apply(c, l);
                let co = outer.apply(map[c] as usize, l);
                if map[ci] == u32::MAX {
                    map[ci] = co as u32;
                    queue.push_back(ci);
                } else if map[ci] != co as u32 {
                    return Ok(false);
                }
            }
        }
    }
    Ok(true)
}

/// True iff inner is a normal subgroup of outer (inner ⊆ outer required).
/// Checked by conjugating inner's Schreier generators by outer's Schreier
/// generators: all conjugates must stabilize inner's basepoint.
pub fn is_normal_in(inner: &CosetTable, outer: &CosetTable) -> Result<bool> {
    if !is_subgroup_of(inner, outer)? {
        return Ok(false);
    }
    let outer_sys = SchreierSystem::new(outer);
    let inner_sys = SchreierSystem::new(inner);
    let outer_words = outer_sys.schreier_generator_words(outer);
    let inner_words = inner_sys.schreier_generator_words(inner);
    for g in &outer_words {
        let g_inv = g.inverse();
        for w in &inner_words {
            let conj = g.concat(w).concat(&g_inv);
            if inner.trace(0, &conj) != 0 {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

// ---------------------------------------------------------------------------
// Subnormal chains
// ---------------------------------------------------------------------------

/// A chain G = T₀ ≥ T₁ ⊳ T₂ ⊳ … of finite-index subgroups with p-power
/// step indices. Later inclusions must be normal; the first step is allowed
/// to be non-normal but the fact is recorded.
#[derive(Clone, Debug)]
pub struct SubnormalChain {
    pub p: u32,
    pub tables: Vec<CosetTable>,
}

/// What chain validation established.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ChainValidation {
    pub step_indices: Vec<usize>,
    pub first_step_normal: bool,
}

impl SubnormalChain {
    pub fn new(p: u32, tables: Vec<CosetTable>) -> Result<Self> {
        check_prime(p)?;
        if tables.is_empty() {
            return Err(Error::Input("chain needs at least one table".into()));
        }
        Ok(SubnormalChain { p, tables })
    }

    /// Verify nesting, p-power step indices and normality of every step
    /// after the first; reports whether the first step happens to be normal.
    pub fn validate(&self) -> Result<ChainValidation> {
        let p = self.p as usize;
        let mut step_indices = Vec::new();
        let mut first_step_normal = true;
        for i in 0..self.tables.len() - 1 {
            let big = &self.tables[i];
            let small = &self.tables[i + 1];
            if !is_subgroup_of(small, big)? {
                return Err(Error::Input(format!(
                    "chain step {i}: level {} is not a subgroup of level {i}",
                    i + 1
                )));
            }
            if small.index() % big.index() != 0 {
                return Err(Error::Input(format!(
                    "chain step {i}: index {} does not divide {}",
                    big.index(),
                    small.index()
                )));
            }
            let mut ratio = small.index() / big.index();
            step_indices.push(ratio);
            while ratio % p == 0 {
                ratio /= p;
            }
            if ratio != 1 {
                return Err(Error::Input(format!(
                    "chain step {i}: index ratio {} is not a power of {p}",
                    small.index() / big.index()
                )));
            }
            let normal = is_normal_in(small, big)?;
            if i == 0 {
                first_step_normal = normal;
            } else if !normal {
                return Err(Error::Input(format!(
                    "chain step {i}: level {} is not normal in level {i}",
                    i + 1
                )));
            }
        }
        Ok(ChainValidation { step_indices, first_step_normal })
    }
}
