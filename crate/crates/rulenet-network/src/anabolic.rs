use petgraph::unionfind::UnionFind;
use rayon::prelude::*;
use rulenet_core::{Alphabet, HashOracle, ModelParams, ReactionOracle, Word};
use serde::{Deserialize, Serialize};

use crate::NetworkError;

/// Vertex budget used by [`build_anabolic_network`].
pub const DEFAULT_MAX_VERTICES: u64 = 50_000_000;

// Per (vertex, food) flags.
const RIGHT: u8 = 1;
const RIGHT_PRIM: u8 = 2;
const LEFT: u8 = 4;
const LEFT_PRIM: u8 = 8;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Side {
    /// `X → X·F`.
    Right,
    /// `X → F·X`.
    Left,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Edge {
    pub from: Word,
    pub to: Word,
    pub food: Word,
    pub side: Side,
    pub primitive: bool,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct ComponentInfo {
    pub size: u32,
    /// Distinct `(X, Y)` pairs.
    pub edges: u32,
    /// Pairs carried by at least one primitive reaction.
    pub primitive_edges: u32,
    pub min_level: u32,
    pub max_level: u32,
    /// Some vertex has an edge leaving the truncation.
    pub open: bool,
}

/// Anabolic network on all words of level `≤ n_max`.
///
/// `X + F → X·F` belongs to the network iff some suffix `s` of `X` has
/// `ω(F, s) = 1`; `X + F → F·X` iff the same holds for a suffix of the
/// reversed word. A reaction is primitive when `s = X`.
///
/// Vertices are numbered level by level, and within a level by the base-`|A|`
/// value of the word. Reactant status is computed from the word minus its
/// first atom (right side) or last atom (left side), so each flag costs two
/// oracle calls.
pub struct AnabolicNetwork {
    alphabet: Alphabet,
    foods: Vec<Word>,
    food_index: Vec<usize>,
    n_max: u32,
    offsets: Vec<usize>,
    powers: Vec<usize>,
    flags: Vec<u8>,
    labels: Vec<u32>,
    components: Vec<ComponentInfo>,
    isolated: Vec<u64>,
    two_molecule: Vec<u64>,
}

pub fn build_anabolic_network(
    params: &ModelParams,
    seed: u64,
    n_max: u32,
) -> Result<AnabolicNetwork, NetworkError> {
    build_anabolic_network_with(
        params,
        &HashOracle::new(params, seed),
        n_max,
        DEFAULT_MAX_VERTICES,
    )
}

pub fn build_anabolic_network_with(
    params: &ModelParams,
    oracle: &impl ReactionOracle,
    n_max: u32,
    max_vertices: u64,
) -> Result<AnabolicNetwork, NetworkError> {
    let alphabet = params.alphabet;
    let a = alphabet.size() as u64;
    let capacity = alphabet.capacity();
    if n_max as usize + 1 > capacity {
        return Err(NetworkError::Capacity {
            vertices: u64::MAX,
            limit: max_vertices,
        });
    }
    let mut total: u64 = 0;
    let mut level_size = 1u64;
    for _ in 0..=n_max {
        level_size = level_size.saturating_mul(a);
        total = total.saturating_add(level_size);
    }
    if total > max_vertices || total > u32::MAX as u64 {
        return Err(NetworkError::Capacity {
            vertices: total,
            limit: max_vertices,
        });
    }
    let foods = params.foodset.foods().to_vec();
    let food_index = foods.iter().map(|f| dense_index(f, a as usize)).collect();
    let max_food = foods.iter().map(|f| f.len()).max().unwrap_or(1);
    let powers: Vec<usize> = (0..=n_max as usize + 1 + max_food)
        .map(|k| (a as usize).checked_pow(k as u32).unwrap_or(usize::MAX))
        .collect();
    let mut offsets = vec![0usize; n_max as usize + 2];
    for n in 0..=n_max as usize {
        offsets[n + 1] = offsets[n] + powers[n + 1];
    }
    let mut net = AnabolicNetwork {
        alphabet,
        foods,
        food_index,
        n_max,
        offsets,
        powers,
        flags: Vec::new(),
        labels: Vec::new(),
        components: Vec::new(),
        isolated: vec![0; n_max as usize + 1],
        two_molecule: vec![0; n_max as usize + 1],
    };
    net.compute_flags(oracle);
    net.compute_components();
    Ok(net)
}

fn dense_index(w: &Word, a: usize) -> usize {
    w.atoms()
        .iter()
        .fold(0usize, |acc, &x| acc * a + x as usize)
}

impl AnabolicNetwork {
    fn compute_flags(&mut self, oracle: &impl ReactionOracle) {
        let nf = self.foods.len();
        let a = self.alphabet.size() as usize;
        let mut flags = vec![0u8; self.vertex_count() * nf];
        for n in 0..=self.n_max as usize {
            let (lower, upper) = flags.split_at_mut(self.offsets[n] * nf);
            let prev: &[u8] = if n > 0 {
                &lower[self.offsets[n - 1] * nf..]
            } else {
                &[]
            };
            let cur = &mut upper[..self.powers[n + 1] * nf];
            let suffix_mod = self.powers[n];
            let (alphabet, foods) = (self.alphabet, &self.foods);
            cur.par_chunks_mut(nf).enumerate().for_each(|(i, slot)| {
                let x = word_at(&alphabet, n, i);
                let rx = x.reversed();
                let (suffix, prefix) = (i % suffix_mod, i / a);
                for (f, &food) in foods.iter().enumerate() {
                    let (rec_r, rec_l) = if n > 0 {
                        (
                            prev[suffix * nf + f] & RIGHT != 0,
                            prev[prefix * nf + f] & LEFT != 0,
                        )
                    } else {
                        (false, false)
                    };
                    let w = oracle.anabolic(food, x);
                    let wl = if rx == x {
                        w
                    } else {
                        oracle.anabolic(food, rx)
                    };
                    let mut b = 0;
                    if w || rec_r {
                        b |= RIGHT;
                    }
                    if w && !rec_r {
                        b |= RIGHT_PRIM;
                    }
                    if wl || rec_l {
                        b |= LEFT;
                    }
                    if wl && !rec_l {
                        b |= LEFT_PRIM;
                    }
                    slot[f] = b;
                }
            });
        }
        self.flags = flags;
    }

    /// Distinct out-neighbours of `v` with a primitive flag; returns whether
    /// some edge leaves the truncation.
    fn out_edges(&self, n: usize, i: usize, buf: &mut Vec<(usize, bool)>) -> bool {
        buf.clear();
        let nf = self.foods.len();
        let v = self.offsets[n] + i;
        let mut open = false;
        for (f, food) in self.foods.iter().enumerate() {
            let b = self.flags[v * nf + f];
            let len = food.len();
            let target = n + len;
            for (bit, prim, side) in [
                (RIGHT, RIGHT_PRIM, Side::Right),
                (LEFT, LEFT_PRIM, Side::Left),
            ] {
                if b & bit == 0 {
                    continue;
                }
                if target > self.n_max as usize {
                    open = true;
                    continue;
                }
                let idx = match side {
                    Side::Right => i * self.powers[len] + self.food_index[f],
                    Side::Left => self.food_index[f] * self.powers[n + 1] + i,
                };
                let t = self.offsets[target] + idx;
                let p = b & prim != 0;
                match buf.iter_mut().find(|(u, _)| *u == t) {
                    Some(e) => e.1 |= p,
                    None => buf.push((t, p)),
                }
            }
        }
        open
    }

    fn compute_components(&mut self) {
        let v_count = self.vertex_count();
        let mut uf = UnionFind::<u32>::new(v_count);
        let mut buf = Vec::new();
        let mut open = vec![false; v_count];
        for n in 0..=self.n_max as usize {
            for i in 0..self.powers[n + 1] {
                let v = self.offsets[n] + i;
                open[v] = self.out_edges(n, i, &mut buf);
                for &(t, _) in &buf {
                    uf.union(v as u32, t as u32);
                }
            }
        }
        let reps = uf.into_labeling();
        let mut compact = vec![u32::MAX; v_count];
        let mut labels = vec![0u32; v_count];
        let mut comps: Vec<ComponentInfo> = Vec::new();
        for n in 0..=self.n_max as usize {
            for i in 0..self.powers[n + 1] {
                let v = self.offsets[n] + i;
                let r = reps[v] as usize;
                if compact[r] == u32::MAX {
                    compact[r] = comps.len() as u32;
                    comps.push(ComponentInfo {
                        min_level: n as u32,
                        ..Default::default()
                    });
                }
                let c = compact[r];
                labels[v] = c;
                let info = &mut comps[c as usize];
                info.size += 1;
                info.max_level = n as u32;
                info.open |= open[v];
            }
        }
        for n in 0..=self.n_max as usize {
            for i in 0..self.powers[n + 1] {
                self.out_edges(n, i, &mut buf);
                let info = &mut comps[labels[self.offsets[n] + i] as usize];
                info.edges += buf.len() as u32;
                info.primitive_edges += buf.iter().filter(|e| e.1).count() as u32;
            }
        }
        for c in &comps {
            if c.open {
                continue;
            }
            match (c.size, c.primitive_edges) {
                (1, _) => self.isolated[c.min_level as usize] += 1,
                (2, 1) if c.edges == 1 => self.two_molecule[c.max_level as usize] += 1,
                _ => {}
            }
        }
        self.labels = labels;
        self.components = comps;
    }

    pub fn alphabet(&self) -> Alphabet {
        self.alphabet
    }

    pub fn n_max(&self) -> u32 {
        self.n_max
    }

    pub fn foods(&self) -> &[Word] {
        &self.foods
    }

    pub fn vertex_count(&self) -> usize {
        self.offsets[self.n_max as usize + 1]
    }

    pub fn level_size(&self, n: u32) -> usize {
        self.powers[n as usize + 1]
    }

    pub fn component_count(&self) -> usize {
        self.components.len()
    }

    pub fn components(&self) -> &[ComponentInfo] {
        &self.components
    }

    /// Vertex id of `w`, if it lies within the truncation.
    pub fn id_of(&self, w: &Word) -> Option<usize> {
        if w.level() > self.n_max || w.width() != self.alphabet.width() {
            return None;
        }
        let n = w.level() as usize;
        Some(self.offsets[n] + dense_index(w, self.alphabet.size() as usize))
    }

    pub fn word_of(&self, id: usize) -> Word {
        let n = self.offsets.partition_point(|&o| o <= id) - 1;
        word_at(&self.alphabet, n, id - self.offsets[n])
    }

    fn require(&self, w: &Word) -> Result<usize, NetworkError> {
        self.id_of(w)
            .ok_or_else(|| NetworkError::UnknownWord(w.to_string()))
    }

    pub fn component_id(&self, w: &Word) -> Result<u32, NetworkError> {
        Ok(self.labels[self.require(w)?])
    }

    pub fn component(&self, w: &Word) -> Result<ComponentInfo, NetworkError> {
        Ok(self.components[self.component_id(w)? as usize])
    }

    pub fn same_component(&self, x: &Word, y: &Word) -> Result<bool, NetworkError> {
        Ok(self.component_id(x)? == self.component_id(y)?)
    }

    /// Singleton components of level `n` that are closed under the truncation.
    pub fn isolated_count(&self, n: u32) -> Result<u64, NetworkError> {
        self.isolated
            .get(n as usize)
            .copied()
            .ok_or(NetworkError::Level {
                n,
                n_max: self.n_max,
            })
    }

    pub fn isolated_counts(&self) -> &[u64] {
        &self.isolated
    }

    /// Closed components `{X, Y}` joined by one primitive edge, indexed by
    /// the level of `Y`.
    pub fn two_molecule_count(&self, n: u32) -> Result<u64, NetworkError> {
        self.two_molecule
            .get(n as usize)
            .copied()
            .ok_or(NetworkError::Level {
                n,
                n_max: self.n_max,
            })
    }

    pub fn two_molecule_counts(&self) -> &[u64] {
        &self.two_molecule
    }

    /// Per level, the vertices whose component reaches beyond `n_max`.
    pub fn open_vertex_counts(&self) -> Vec<u64> {
        (0..=self.n_max as usize)
            .map(|n| {
                self.labels[self.offsets[n]..self.offsets[n + 1]]
                    .iter()
                    .filter(|&&c| self.components[c as usize].open)
                    .count() as u64
            })
            .collect()
    }

    /// Reactions leaving `w`, including those whose product lies beyond the
    /// truncation (the target word is then still formed when it fits).
    pub fn reactions_from(&self, w: &Word) -> Result<Vec<Edge>, NetworkError> {
        let v = self.require(w)?;
        let nf = self.foods.len();
        let mut out = Vec::new();
        for (f, &food) in self.foods.iter().enumerate() {
            let b = self.flags[v * nf + f];
            for (bit, prim, side) in [
                (RIGHT, RIGHT_PRIM, Side::Right),
                (LEFT, LEFT_PRIM, Side::Left),
            ] {
                if b & bit == 0 {
                    continue;
                }
                let to = match side {
                    Side::Right => w.concat(&food),
                    Side::Left => food.concat(w),
                };
                if let Ok(to) = to {
                    out.push(Edge {
                        from: *w,
                        to,
                        food,
                        side,
                        primitive: b & prim != 0,
                    });
                }
            }
        }
        Ok(out)
    }

    /// All reactions with both ends inside the truncation.
    pub fn edges(&self) -> Vec<Edge> {
        let mut out = Vec::new();
        for v in 0..self.vertex_count() {
            let w = self.word_of(v);
            let edges = self.reactions_from(&w).expect("vertex in range");
            out.extend(edges.into_iter().filter(|e| e.to.level() <= self.n_max));
        }
        out
    }

    /// Primitive reactions as `(X, Y, offset of X in Y)` with vertex ids.
    pub fn primitive_reactions(&self) -> Vec<(usize, usize, u32)> {
        let nf = self.foods.len();
        let mut out = Vec::new();
        for n in 0..=self.n_max as usize {
            for i in 0..self.powers[n + 1] {
                let v = self.offsets[n] + i;
                for (f, food) in self.foods.iter().enumerate() {
                    let (b, len) = (self.flags[v * nf + f], food.len());
                    if n + len > self.n_max as usize {
                        continue;
                    }
                    if b & RIGHT_PRIM != 0 {
                        let t = self.offsets[n + len] + i * self.powers[len] + self.food_index[f];
                        out.push((v, t, 0));
                    }
                    if b & LEFT_PRIM != 0 {
                        let t = self.offsets[n + len] + self.food_index[f] * self.powers[n + 1] + i;
                        out.push((v, t, len as u32));
                    }
                }
            }
        }
        out
    }

    /// Distinct `(X, Y)` pairs carried by a primitive reaction, as vertex ids.
    pub fn primitive_edge_ids(&self) -> Vec<(usize, usize)> {
        let mut buf = Vec::new();
        let mut out = Vec::new();
        for n in 0..=self.n_max as usize {
            for i in 0..self.powers[n + 1] {
                self.out_edges(n, i, &mut buf);
                let v = self.offsets[n] + i;
                out.extend(buf.iter().filter(|e| e.1).map(|e| (v, e.0)));
            }
        }
        out
    }
}

pub(crate) fn word_at(alphabet: &Alphabet, n: usize, mut i: usize) -> Word {
    let a = alphabet.size() as usize;
    let width = alphabet.width() as u32;
    let mut code = 0u128;
    for k in 0..=n {
        code |= ((i % a) as u128) << (k as u32 * width);
        i /= a;
    }
    alphabet.from_code(n + 1, code)
}
