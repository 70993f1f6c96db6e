use std::collections::{BTreeMap, BTreeSet, VecDeque};

use rulenet_core::{ModelParams, Word};
use serde::{Deserialize, Serialize};

use crate::{AnabolicNetwork, NetworkError, Side};

/// Directed tree of primitive single-atom concatenations without reverse
/// forks, rooted at its lowest vertex.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PrimitiveComponent {
    root: Word,
    vertices: BTreeSet<Word>,
    edges: BTreeSet<(Word, Word)>,
}

impl PrimitiveComponent {
    pub fn single(w: Word) -> Self {
        Self {
            root: w,
            vertices: BTreeSet::from([w]),
            edges: BTreeSet::new(),
        }
    }

    pub fn from_edges(edges: impl IntoIterator<Item = (Word, Word)>) -> Result<Self, NetworkError> {
        let edges: BTreeSet<(Word, Word)> = edges.into_iter().collect();
        let mut parent: BTreeMap<Word, Word> = BTreeMap::new();
        let mut vertices = BTreeSet::new();
        for &(x, y) in &edges {
            let n = x.len();
            let concat = y.len() == n + 1 && (y.prefix(n) == x || y.suffix(n) == x);
            if !concat || x.width() != y.width() {
                return Err(NetworkError::InvalidEdge {
                    from: x.to_string(),
                    to: y.to_string(),
                });
            }
            if parent.insert(y, x).is_some_and(|old| old != x) {
                return Err(NetworkError::ReverseFork(y.to_string()));
            }
            vertices.insert(x);
            vertices.insert(y);
        }
        let mut roots = vertices.iter().filter(|v| !parent.contains_key(v));
        let (Some(&root), None) = (roots.next(), roots.next()) else {
            return Err(NetworkError::NotConnected);
        };
        Ok(Self {
            root,
            vertices,
            edges,
        })
    }

    pub fn root(&self) -> Word {
        self.root
    }

    pub fn vertices(&self) -> &BTreeSet<Word> {
        &self.vertices
    }

    pub fn edges(&self) -> &BTreeSet<(Word, Word)> {
        &self.edges
    }

    pub fn n_min(&self) -> u32 {
        self.root.level()
    }

    pub fn n_max(&self) -> u32 {
        self.vertices.iter().map(|v| v.level()).max().unwrap_or(0)
    }

    /// Prefixes of the root at levels `1..n_min`.
    pub fn supplementary(&self) -> Vec<Word> {
        (1..self.n_min())
            .map(|k| self.root.prefix(k as usize + 1))
            .collect()
    }

    /// `|V_n|` for `n = 0..=n_max`, supplementary vertices included.
    pub fn vertex_level_counts(&self) -> Vec<u32> {
        let mut out = vec![0; self.n_max() as usize + 1];
        for v in self.vertices.iter().chain(self.supplementary().iter()) {
            out[v.level() as usize] += 1;
        }
        out
    }

    /// `|E_n|`, edges indexed by the level of their head.
    pub fn edge_level_counts(&self) -> Vec<u32> {
        let mut out = vec![0; self.n_max() as usize + 1];
        for (_, y) in &self.edges {
            out[y.level() as usize] += 1;
        }
        out
    }
}

/// Approximate probability that `component` is a maximal primitive
/// component, for the foodset of all atoms.
pub fn primitive_component_prob(
    params: &ModelParams,
    component: &PrimitiveComponent,
) -> Result<f64, NetworkError> {
    let size = params.alphabet_size() as usize;
    if params.foodset.len() != size || params.foodset.levels().iter().any(|&l| l != 0) {
        return Err(NetworkError::FoodsetNotAtoms);
    }
    let (p, z) = (params.p, params.z);
    let mut ln = 0.0;
    for (n, &e) in component.edge_level_counts().iter().enumerate() {
        if e > 0 {
            let f = p * z.powi(n as i32);
            ln += e as f64 * (f / (1.0 - f)).ln();
        }
    }
    for (n, &v) in component.vertex_level_counts().iter().enumerate() {
        let silent: f64 = (1..=n).map(|j| (-p * z.powi(j as i32 + 1)).ln_1p()).sum();
        ln += v as f64 * 2.0 * size as f64 * silent;
    }
    Ok(ln.exp())
}

/// Two distinct directed paths with the same endpoints.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TwoPaths<T> {
    pub first: Vec<T>,
    pub second: Vec<T>,
}

/// Checks that no two distinct directed paths join the same pair of vertices.
pub fn no_two_paths<T: Copy + Ord>(edges: &[(T, T)]) -> Result<(), TwoPaths<T>> {
    let shifted: Vec<(T, T, u32)> = edges.iter().map(|&(x, y)| (x, y, 0)).collect();
    no_two_embedded_paths(&shifted)
}

/// Same check where each edge `(x, y, s)` places `x` at offset `s` inside `y`.
/// Paths count as equal-ended only when they also embed the start at the
/// same position of the end.
pub fn no_two_embedded_paths<T: Copy + Ord>(edges: &[(T, T, u32)]) -> Result<(), TwoPaths<T>> {
    let mut parents: BTreeMap<T, BTreeSet<(T, u32)>> = BTreeMap::new();
    for &(x, y, s) in edges {
        parents.entry(y).or_default().insert((x, s));
    }
    // Two paths that part and rejoin meet at a vertex with two parents whose
    // ancestor sets intersect.
    for (&v, ps) in &parents {
        if ps.len() < 2 {
            continue;
        }
        let ancestry: Vec<(T, BTreeMap<(T, u32), (T, u32)>)> = ps
            .iter()
            .map(|&(p, s)| (p, ancestors(&parents, p, s)))
            .collect();
        for (i, (pi, ai)) in ancestry.iter().enumerate() {
            for (pj, aj) in &ancestry[i + 1..] {
                if let Some(&c) = ai.keys().find(|k| aj.contains_key(k)) {
                    return Err(TwoPaths {
                        first: trace(ai, c, *pi, v),
                        second: trace(aj, c, *pj, v),
                    });
                }
            }
        }
    }
    Ok(())
}

/// Ancestors of `start` keyed by (vertex, offset inside the final head),
/// each mapped to its successor on a path towards `start`.
fn ancestors<T: Copy + Ord>(
    parents: &BTreeMap<T, BTreeSet<(T, u32)>>,
    start: T,
    shift: u32,
) -> BTreeMap<(T, u32), (T, u32)> {
    let mut next = BTreeMap::from([((start, shift), (start, shift))]);
    let mut queue = VecDeque::from([(start, shift)]);
    while let Some((u, su)) = queue.pop_front() {
        for &(w, s) in parents.get(&u).into_iter().flatten() {
            if let std::collections::btree_map::Entry::Vacant(e) = next.entry((w, su + s)) {
                e.insert((u, su));
                queue.push_back((w, su + s));
            }
        }
    }
    next
}

/// Walks from `from` to the parent that started the search, then to `end`.
fn trace<T: Copy + Ord>(
    next: &BTreeMap<(T, u32), (T, u32)>,
    from: (T, u32),
    parent: T,
    end: T,
) -> Vec<T> {
    let mut path = vec![from.0];
    let mut u = from;
    while next[&u] != u {
        u = next[&u];
        path.push(u.0);
    }
    debug_assert!(u.0 == parent);
    path.push(end);
    path
}

impl AnabolicNetwork {
    fn words_of(&self, t: TwoPaths<usize>) -> TwoPaths<Word> {
        TwoPaths {
            first: t.first.into_iter().map(|v| self.word_of(v)).collect(),
            second: t.second.into_iter().map(|v| self.word_of(v)).collect(),
        }
    }

    /// Checks the no-two-paths property on the primitive edges, comparing
    /// paths by their end words only.
    pub fn check_no_two_paths(&self) -> Result<(), TwoPaths<Word>> {
        no_two_paths(&self.primitive_edge_ids()).map_err(|t| self.words_of(t))
    }

    /// Checks the property for paths that embed the start word at the same
    /// position of the end word.
    pub fn check_no_two_embedded_paths(&self) -> Result<(), TwoPaths<Word>> {
        no_two_embedded_paths(&self.primitive_reactions()).map_err(|t| self.words_of(t))
    }

    /// Component of `w` under primitive edges within the truncation.
    pub fn primitive_component(&self, w: &Word) -> Result<PrimitiveComponent, NetworkError> {
        self.component_id(w)?;
        let mut seen = BTreeSet::from([*w]);
        let mut edges = Vec::new();
        let mut queue = VecDeque::from([*w]);
        while let Some(u) = queue.pop_front() {
            let mut adjacent = Vec::new();
            for e in self.reactions_from(&u)? {
                if e.primitive && e.to.level() <= self.n_max() {
                    adjacent.push((u, e.to));
                }
            }
            for x in self.primitive_parents(&u)? {
                adjacent.push((x, u));
            }
            for (x, y) in adjacent {
                edges.push((x, y));
                for v in [x, y] {
                    if seen.insert(v) {
                        queue.push_back(v);
                    }
                }
            }
        }
        if edges.is_empty() {
            Ok(PrimitiveComponent::single(*w))
        } else {
            PrimitiveComponent::from_edges(edges)
        }
    }

    fn primitive_parents(&self, y: &Word) -> Result<Vec<Word>, NetworkError> {
        let mut out = Vec::new();
        for &food in self.foods() {
            let (n, k) = (y.len(), food.len());
            if n <= k {
                continue;
            }
            let candidates = [
                (Side::Right, y.suffix(k) == food, y.prefix(n - k)),
                (Side::Left, y.prefix(k) == food, y.suffix(n - k)),
            ];
            for (side, matches, x) in candidates {
                if matches
                    && self
                        .reactions_from(&x)?
                        .iter()
                        .any(|e| e.side == side && e.food == food && e.to == *y && e.primitive)
                {
                    out.push(x);
                }
            }
        }
        Ok(out)
    }
}
