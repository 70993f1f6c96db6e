use rulenet_core::{Alphabet, Kind, Word};
use serde::{Deserialize, Serialize};
use smallvec::SmallVec;

/// Firing metadata of a blue vertex: food indices (anabolic) or cut
/// positions (catabolic) that fire on the full word.
pub type PrimMeta = SmallVec<[u16; 2]>;

/// Red and blue vertex sets per level, stored as sorted packed codes.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LevelTree {
    pub(crate) kind: Kind,
    pub(crate) alphabet: Alphabet,
    pub(crate) n_max: u32,
    pub(crate) red: Vec<Vec<u128>>,
    pub(crate) prim: Vec<Vec<u128>>,
    pub(crate) prim_meta: Vec<Vec<PrimMeta>>,
}

pub type CompositionTree = LevelTree;
pub type FragmentationTree = LevelTree;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Height {
    /// No red vertex at all, not even an atom.
    Empty,
    Finite(u32),
    /// Red vertices survive at `n_max`.
    Censored(u32),
}

impl Height {
    /// Value used in reports: −1 for an empty tree, `n_max` when censored.
    pub fn reported(&self) -> i64 {
        match *self {
            Height::Empty => -1,
            Height::Finite(h) | Height::Censored(h) => h as i64,
        }
    }

    pub fn is_censored(&self) -> bool {
        matches!(self, Height::Censored(_))
    }
}

impl LevelTree {
    pub(crate) fn new(kind: Kind, alphabet: Alphabet, n_max: u32) -> Self {
        Self {
            kind,
            alphabet,
            n_max,
            red: Vec::new(),
            prim: Vec::new(),
            prim_meta: Vec::new(),
        }
    }

    pub fn kind(&self) -> Kind {
        self.kind
    }

    pub fn alphabet(&self) -> Alphabet {
        self.alphabet
    }

    pub fn n_max(&self) -> u32 {
        self.n_max
    }

    /// Number of levels actually materialized (construction stops after the
    /// first empty red level).
    pub fn built_levels(&self) -> usize {
        self.red.len()
    }

    /// `|V_n|` for `n = 0..=n_max`.
    pub fn level_sizes(&self) -> Vec<usize> {
        self.padded(&self.red)
    }

    /// `|Prim_n|` for `n = 0..=n_max`.
    pub fn prim_counts(&self) -> Vec<usize> {
        self.padded(&self.prim)
    }

    fn padded(&self, levels: &[Vec<u128>]) -> Vec<usize> {
        let mut out: Vec<usize> = levels.iter().map(Vec::len).collect();
        out.resize(self.n_max as usize + 1, 0);
        out
    }

    pub fn height(&self) -> Height {
        match self.red.iter().rposition(|l| !l.is_empty()) {
            None => Height::Empty,
            Some(h) if h as u32 == self.n_max => Height::Censored(self.n_max),
            Some(h) => Height::Finite(h as u32),
        }
    }

    /// First level with no red vertex, if reached.
    pub fn extinct_at(&self) -> Option<u32> {
        self.red.iter().position(Vec::is_empty).map(|n| n as u32)
    }

    pub fn red_codes(&self, level: u32) -> &[u128] {
        self.red.get(level as usize).map_or(&[], Vec::as_slice)
    }

    pub fn prim_codes(&self, level: u32) -> &[u128] {
        self.prim.get(level as usize).map_or(&[], Vec::as_slice)
    }

    pub fn red_words(&self, level: u32) -> impl Iterator<Item = Word> + '_ {
        let a = self.alphabet;
        self.red_codes(level)
            .iter()
            .map(move |&c| a.from_code(level as usize + 1, c))
    }

    pub fn prim_words(&self, level: u32) -> impl Iterator<Item = Word> + '_ {
        let a = self.alphabet;
        self.prim_codes(level)
            .iter()
            .map(move |&c| a.from_code(level as usize + 1, c))
    }

    /// Blue words of a level paired with their firing metadata.
    pub fn prims_with_meta(&self, level: u32) -> impl Iterator<Item = (Word, &PrimMeta)> + '_ {
        let meta = self
            .prim_meta
            .get(level as usize)
            .map_or(&[][..], Vec::as_slice);
        self.prim_words(level).zip(meta)
    }

    pub fn is_red(&self, w: &Word) -> bool {
        self.red_codes(w.level()).binary_search(&w.code()).is_ok()
    }

    pub fn is_prim(&self, w: &Word) -> bool {
        self.prim_codes(w.level()).binary_search(&w.code()).is_ok()
    }

    pub fn total_vertices(&self) -> usize {
        self.red.iter().chain(&self.prim).map(Vec::len).sum()
    }
}
