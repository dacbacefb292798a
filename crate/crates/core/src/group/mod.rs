//! Group backends: finitely presented groups with a decidable, cheap word
//! problem, their word metric, geodesics and Gromov products.
//!
//! Four kinds are supported: free groups, free products of finite cyclic
//! groups, C'(1/6) small-cancellation presentations (Dehn's algorithm), and
//! integer lattices (negative control: not hyperbolic for dim >= 2).

mod ball;
mod delta;
mod small_cancellation;

pub use ball::{Ball, GeodesicSegment};
pub use delta::{estimate_delta, DeltaEstimate, DeltaMethod, DeltaSampling};

use crate::error::{Error, Result};
use crate::half::Half;
use serde::{Deserialize, Serialize};
use small_cancellation::SmallCancData;
use std::fmt;
use std::sync::Arc;

/// Index into a group's symmetric generating set.
pub type Gen = u8;

/// A group element in canonical normal form: a sequence of generator
/// indices. For every backend the canonical word is geodesic, so
/// `letters.len()` equals the distance to the identity.
#[derive(Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Word {
    letters: Vec<Gen>,
}

impl Word {
    pub fn empty() -> Word {
        Word {
            letters: Vec::new(),
        }
    }

    pub(crate) fn from_canonical(letters: Vec<Gen>) -> Word {
        Word { letters }
    }

    pub fn letters(&self) -> &[Gen] {
        &self.letters
    }

    pub fn len(&self) -> u32 {
        self.letters.len() as u32
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }
}

impl fmt::Debug for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Word({:?})", self.letters)
    }
}

/// Shortlex: by length first, then lexicographically by generator index.
/// All deterministic tie-breaking in the crate rests on this order.
impl Ord for Word {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.letters
            .len()
            .cmp(&other.letters.len())
            .then_with(|| self.letters.cmp(&other.letters))
    }
}

impl PartialOrd for Word {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

/// Symmetric generating set: symbol names plus the formal-inverse pairing.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct GeneratorSet {
    symbols: Vec<String>,
    inverse: Vec<Gen>,
}

impl GeneratorSet {
    fn paired(letters: &[char]) -> GeneratorSet {
        let mut symbols = Vec::new();
        let mut inverse = Vec::new();
        for &c in letters {
            let i = symbols.len() as Gen;
            symbols.push(c.to_string());
            symbols.push(format!("{c}'"));
            inverse.push(i + 1);
            inverse.push(i);
        }
        GeneratorSet { symbols, inverse }
    }

    pub fn len(&self) -> usize {
        self.symbols.len()
    }

    pub fn is_empty(&self) -> bool {
        self.symbols.is_empty()
    }

    pub fn symbol(&self, g: Gen) -> &str {
        &self.symbols[g as usize]
    }

    pub fn inverse(&self, g: Gen) -> Gen {
        self.inverse[g as usize]
    }

    pub fn iter(&self) -> impl Iterator<Item = Gen> {
        0..self.symbols.len() as Gen
    }

    pub fn index_of(&self, symbol: &str) -> Option<Gen> {
        self.symbols.iter().position(|s| s == symbol).map(|i| i as Gen)
    }
}

const FACTOR_LETTERS: [char; 26] = [
    'a', 'b', 'c', 'd', 'f', 'g', 'h', 'i', 'j', 'k', 'l', 'm', 'n', 'o', 'p', 'q', 'r', 's', 't',
    'u', 'v', 'w', 'x', 'y', 'z', 'e',
];

#[derive(Debug, Clone)]
enum GroupKind {
    Free {
        rank: u8,
    },
    FreeProductCyclic {
        orders: Vec<u32>,
        /// factor index and exponent sign per generator
        gen_factor: Vec<(u8, i64)>,
    },
    SmallCancellation(Arc<SmallCancData>),
    Lattice {
        dim: u8,
    },
}

/// A group backend. Immutable after construction and cheap to clone;
/// safe to share across worker threads.
#[derive(Debug, Clone)]
pub struct GroupSpec {
    kind: GroupKind,
    gens: GeneratorSet,
    label: String,
}

/// Serializable description of a group, as read from configs.
#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum GroupConfig {
    Free { rank: u8 },
    FreeProductCyclic { orders: Vec<u32> },
    SmallCancellation { generators: String, relators: Vec<String> },
    Lattice { dim: u8 },
}

impl GroupConfig {
    /// Shorthand forms: `free:2`, `fpc:2,2,2`, `lattice:2`, `surface:2`.
    pub fn parse(s: &str) -> Result<GroupConfig> {
        let (head, tail) = s
            .split_once(':')
            .ok_or_else(|| Error::InvalidSpec(format!("group `{s}`: expected kind:params")))?;
        let bad = |m: &str| Error::InvalidSpec(format!("group `{s}`: {m}"));
        match head {
            "free" => Ok(GroupConfig::Free {
                rank: tail.parse().map_err(|_| bad("bad rank"))?,
            }),
            "fpc" | "free-product" => {
                let orders = tail
                    .split(',')
                    .map(|t| t.trim().parse::<u32>())
                    .collect::<std::result::Result<Vec<_>, _>>()
                    .map_err(|_| bad("bad orders"))?;
                Ok(GroupConfig::FreeProductCyclic { orders })
            }
            "lattice" => Ok(GroupConfig::Lattice {
                dim: tail.parse().map_err(|_| bad("bad dim"))?,
            }),
            "surface" => {
                let genus: u8 = tail.parse().map_err(|_| bad("bad genus"))?;
                if genus < 2 {
                    return Err(bad("surface presentations need genus >= 2"));
                }
                let letters: Vec<char> = FACTOR_LETTERS[..2 * genus as usize].to_vec();
                let generators = letters
                    .iter()
                    .flat_map(|c| [c.to_string(), format!("{c}'")])
                    .collect::<Vec<_>>()
                    .join(" ");
                let relator = letters
                    .chunks(2)
                    .map(|p| format!("{0} {1} {0}' {1}'", p[0], p[1]))
                    .collect::<Vec<_>>()
                    .join(" ");
                Ok(GroupConfig::SmallCancellation {
                    generators,
                    relators: vec![relator],
                })
            }
            _ => Err(bad("unknown kind")),
        }
    }
}

impl GroupSpec {
    pub fn from_config(cfg: &GroupConfig) -> Result<GroupSpec> {
        match cfg {
            GroupConfig::Free { rank } => GroupSpec::free(*rank),
            GroupConfig::FreeProductCyclic { orders } => {
                GroupSpec::free_product_cyclic(orders.clone())
            }
            GroupConfig::SmallCancellation { generators, relators } => {
                GroupSpec::small_cancellation(generators, relators)
            }
            GroupConfig::Lattice { dim } => GroupSpec::lattice(*dim),
        }
    }

    pub fn free(rank: u8) -> Result<GroupSpec> {
        if rank < 2 || rank as usize > FACTOR_LETTERS.len() - 1 {
            return Err(Error::InvalidSpec(format!(
                "free rank must be in 2..=25, got {rank}"
            )));
        }
        Ok(GroupSpec {
            kind: GroupKind::Free { rank },
            gens: GeneratorSet::paired(&FACTOR_LETTERS[..rank as usize]),
            label: format!("free:{rank}"),
        })
    }

    pub fn free_product_cyclic(orders: Vec<u32>) -> Result<GroupSpec> {
        if orders.len() < 2 || orders.iter().any(|&n| n < 2) {
            return Err(Error::InvalidSpec(
                "free product needs >= 2 cyclic factors, each of order >= 2".into(),
            ));
        }
        if orders.len() > FACTOR_LETTERS.len() - 1 {
            return Err(Error::InvalidSpec("too many factors".into()));
        }
        let mut symbols = Vec::new();
        let mut inverse = Vec::new();
        let mut gen_factor = Vec::new();
        for (f, &n) in orders.iter().enumerate() {
            let c = FACTOR_LETTERS[f];
            let i = symbols.len() as Gen;
            if n == 2 {
                symbols.push(c.to_string());
                inverse.push(i);
                gen_factor.push((f as u8, 1));
            } else {
                symbols.push(c.to_string());
                symbols.push(format!("{c}'"));
                inverse.push(i + 1);
                inverse.push(i);
                gen_factor.push((f as u8, 1));
                gen_factor.push((f as u8, -1));
            }
        }
        let label = format!(
            "fpc:{}",
            orders.iter().map(|n| n.to_string()).collect::<Vec<_>>().join(",")
        );
        Ok(GroupSpec {
            kind: GroupKind::FreeProductCyclic { orders, gen_factor },
            gens: GeneratorSet { symbols, inverse },
            label,
        })
    }

    pub fn lattice(dim: u8) -> Result<GroupSpec> {
        if dim < 1 || dim as usize > FACTOR_LETTERS.len() - 1 {
            return Err(Error::InvalidSpec("lattice dim must be in 1..=25".into()));
        }
        Ok(GroupSpec {
            kind: GroupKind::Lattice { dim },
            gens: GeneratorSet::paired(&FACTOR_LETTERS[..dim as usize]),
            label: format!("lattice:{dim}"),
        })
    }

    /// `generators` is a space-separated symmetric symbol list
    /// ("a b a' b' ..."); relators are space-separated words over it.
    /// The C'(1/6) condition is verified at construction.
    pub fn small_cancellation(generators: &str, relators: &[String]) -> Result<GroupSpec> {
        let mut symbols: Vec<String> = Vec::new();
        for tok in generators.split_whitespace() {
            if symbols.iter().any(|s| s == tok) {
                return Err(Error::InvalidSpec(format!("duplicate generator `{tok}`")));
            }
            symbols.push(tok.to_string());
        }
        let mut inverse = vec![Gen::MAX; symbols.len()];
        for (i, s) in symbols.iter().enumerate() {
            let partner = if let Some(base) = s.strip_suffix('\'') {
                base.to_string()
            } else {
                format!("{s}'")
            };
            match symbols.iter().position(|t| *t == partner) {
                Some(j) => inverse[i] = j as Gen,
                None => {
                    return Err(Error::InvalidSpec(format!(
                        "generating set not symmetric: no inverse for `{s}`"
                    )))
                }
            }
        }
        let gens = GeneratorSet {
            symbols,
            inverse,
        };
        let mut relator_words = Vec::new();
        for r in relators {
            let mut letters = Vec::new();
            for tok in r.split_whitespace() {
                let g = gens
                    .index_of(tok)
                    .ok_or_else(|| Error::UnknownGenerator(tok.to_string()))?;
                letters.push(g);
            }
            relator_words.push(letters);
        }
        let data = SmallCancData::new(&gens, relator_words)?;
        Ok(GroupSpec {
            kind: GroupKind::SmallCancellation(Arc::new(data)),
            gens,
            label: "small-cancellation".into(),
        })
    }

    pub fn gens(&self) -> &GeneratorSet {
        &self.gens
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn identity(&self) -> Word {
        Word::empty()
    }

    /// Lattices of dimension >= 2 exist purely as a negative control.
    pub fn non_hyperbolic(&self) -> bool {
        matches!(self.kind, GroupKind::Lattice { dim } if dim >= 2)
    }

    /// Any lattice: the walk may be recurrent and there is no usable
    /// boundary, so boundary-dependent operations refuse these backends.
    pub fn is_lattice(&self) -> bool {
        matches!(self.kind, GroupKind::Lattice { .. })
    }

    /// True when the Cayley graph is a tree (free groups, and free products
    /// of order-2 factors). Trees admit exact tube membership.
    pub fn is_tree(&self) -> bool {
        match &self.kind {
            GroupKind::Free { .. } => true,
            GroupKind::FreeProductCyclic { orders, .. } => orders.iter().all(|&n| n == 2),
            _ => false,
        }
    }

    pub fn guard_hyperbolic(&self, what: &str) -> Result<()> {
        if self.is_lattice() {
            Err(Error::NonHyperbolic(format!("{what} on {}", self.label)))
        } else {
            Ok(())
        }
    }

    /// Canonical normal form of an arbitrary letter sequence.
    /// Idempotent; equal group elements map to equal words.
    pub fn normalize(&self, letters: &[Gen]) -> Result<Word> {
        match &self.kind {
            GroupKind::Free { .. } => Ok(Word::from_canonical(self.free_reduce(letters))),
            GroupKind::FreeProductCyclic { orders, gen_factor } => {
                Ok(normalize_free_product(letters, orders, gen_factor))
            }
            GroupKind::Lattice { dim } => Ok(normalize_lattice(letters, *dim, &self.gens)),
            GroupKind::SmallCancellation(data) => data.normalize(&self.gens, letters),
        }
    }

    fn free_reduce(&self, letters: &[Gen]) -> Vec<Gen> {
        let mut out: Vec<Gen> = Vec::with_capacity(letters.len());
        for &g in letters {
            if out.last() == Some(&self.gens.inverse(g)) {
                out.pop();
            } else {
                out.push(g);
            }
        }
        out
    }

    pub fn mul(&self, x: &Word, y: &Word) -> Result<Word> {
        let mut letters = Vec::with_capacity(x.letters.len() + y.letters.len());
        letters.extend_from_slice(&x.letters);
        letters.extend_from_slice(&y.letters);
        self.normalize(&letters)
    }

    pub fn mul_gen(&self, x: &Word, g: Gen) -> Result<Word> {
        let mut letters = Vec::with_capacity(x.letters.len() + 1);
        letters.extend_from_slice(&x.letters);
        letters.push(g);
        self.normalize(&letters)
    }

    pub fn inv(&self, x: &Word) -> Result<Word> {
        let letters: Vec<Gen> = x
            .letters
            .iter()
            .rev()
            .map(|&g| self.gens.inverse(g))
            .collect();
        self.normalize(&letters)
    }

    /// `x^{-1} y` — the relative position of `y` seen from `x`.
    pub fn relative(&self, x: &Word, y: &Word) -> Result<Word> {
        let mut letters: Vec<Gen> = x
            .letters
            .iter()
            .rev()
            .map(|&g| self.gens.inverse(g))
            .collect();
        letters.extend_from_slice(&y.letters);
        self.normalize(&letters)
    }

    /// The distinct one-step neighbours of `x`, in shortlex order.
    pub fn neighbors(&self, x: &Word) -> Result<Vec<Word>> {
        let mut out: Vec<Word> = Vec::with_capacity(self.gens.len());
        for g in self.gens.iter() {
            let w = self.mul_gen(x, g)?;
            if w != *x && !out.contains(&w) {
                out.push(w);
            }
        }
        out.sort();
        Ok(out)
    }

    /// Exact word-metric distance. The canonical form is geodesic for every
    /// backend, so this is the canonical length of `x^{-1} y`.
    pub fn distance(&self, x: &Word, y: &Word) -> Result<u32> {
        Ok(self.relative(x, y)?.len())
    }

    /// Distance if it does not exceed `limit`, else `None`. For the
    /// small-cancellation backend this bounds how far the normal-form
    /// tables are grown.
    pub fn distance_within(&self, x: &Word, y: &Word, limit: u32) -> Result<Option<u32>> {
        match &self.kind {
            GroupKind::SmallCancellation(data) => {
                let mut letters: Vec<Gen> = x
                    .letters
                    .iter()
                    .rev()
                    .map(|&g| self.gens.inverse(g))
                    .collect();
                letters.extend_from_slice(&y.letters);
                data.distance_within(&self.gens, &letters, limit)
            }
            _ => {
                let d = self.distance(x, y)?;
                Ok(if d <= limit { Some(d) } else { None })
            }
        }
    }

    /// Gromov product (x, y) with respect to `base`, doubled-exact.
    pub fn gromov_product(&self, x: &Word, y: &Word, base: &Word) -> Result<Half> {
        let dx = self.distance(x, base)? as i64;
        let dy = self.distance(y, base)? as i64;
        let dxy = self.distance(x, y)? as i64;
        Ok(Half::from_doubled(dx + dy - dxy))
    }

    /// Parse a word like `aab'b'` or `a a b'` ("e" or "" is the identity).
    pub fn word_from_str(&self, s: &str) -> Result<Word> {
        let compact: String = s.chars().filter(|c| !c.is_whitespace() && *c != '.').collect();
        if compact.is_empty() || compact == "e" {
            return Ok(Word::empty());
        }
        let chars: Vec<char> = compact.chars().collect();
        let mut letters = Vec::new();
        let mut i = 0;
        while i < chars.len() {
            let mut sym = chars[i].to_string();
            if i + 1 < chars.len() && chars[i + 1] == '\'' {
                sym.push('\'');
                i += 2;
            } else {
                i += 1;
            }
            let g = self
                .gens
                .index_of(&sym)
                .ok_or_else(|| Error::UnknownGenerator(sym.clone()))?;
            letters.push(g);
        }
        self.normalize(&letters)
    }

    pub fn word_to_string(&self, w: &Word) -> String {
        if w.is_empty() {
            return "e".to_string();
        }
        w.letters
            .iter()
            .map(|&g| self.gens.symbol(g))
            .collect::<Vec<_>>()
            .concat()
    }

    /// Deterministic geodesic from `x` to `y`: at every step the shortlex
    /// least neighbour closer to the target (equivalently, the
    /// lexicographically least BFS parent).
    pub fn geodesic(&self, x: &Word, y: &Word) -> Result<GeodesicSegment> {
        ball::geodesic(self, x, y)
    }

    /// Exhaustive radius-`radius` ball around `center` with BFS parents.
    pub fn ball(&self, center: &Word, radius: u32, element_budget: u64) -> Result<Ball> {
        ball::build_ball(self, center, radius, element_budget)
    }

    /// Number of elements a ball of the given radius would hold, when a
    /// closed form is available (used to fail fast before a doomed BFS).
    pub fn ball_size_hint(&self, radius: u32) -> Option<u128> {
        match &self.kind {
            GroupKind::Free { rank } => {
                let k = *rank as u128;
                let q = 2 * k - 1;
                let mut sphere: u128 = 1;
                let mut total: u128 = 1;
                for d in 1..=radius {
                    sphere = if d == 1 { 2 * k } else { sphere.checked_mul(q)? };
                    total = total.checked_add(sphere)?;
                    if total > u64::MAX as u128 {
                        return Some(u128::MAX);
                    }
                }
                Some(total)
            }
            GroupKind::Lattice { dim } => {
                // crude upper bound, adequate for budget checks
                let side = 2 * radius as u128 + 1;
                let mut total: u128 = 1;
                for _ in 0..*dim {
                    total = total.checked_mul(side)?;
                }
                Some(total)
            }
            _ => None,
        }
    }
}

fn normalize_free_product(letters: &[Gen], orders: &[u32], gen_factor: &[(u8, i64)]) -> Word {
    // syllable stack: (factor, exponent in 1..order)
    let mut stack: Vec<(u8, i64)> = Vec::new();
    for &g in letters {
        let (f, s) = gen_factor[g as usize];
        let n = orders[f as usize] as i64;
        match stack.last_mut() {
            Some((tf, te)) if *tf == f => {
                *te = (*te + s).rem_euclid(n);
                if *te == 0 {
                    stack.pop();
                }
            }
            _ => {
                let e = s.rem_euclid(n);
                if e != 0 {
                    stack.push((f, e));
                }
            }
        }
    }
    // canonical letters: shortest spelling per syllable, positive on ties
    let mut out = Vec::new();
    for (f, e) in stack {
        let n = orders[f as usize] as i64;
        if 2 * e <= n {
            // order-2 factors always land here (e = 1, n = 2)
            let pos = gen_index_for_factor(gen_factor, f, 1).expect("positive generator");
            for _ in 0..e {
                out.push(pos);
            }
        } else {
            let neg = gen_index_for_factor(gen_factor, f, -1).expect("negative generator");
            for _ in 0..(n - e) {
                out.push(neg);
            }
        }
    }
    Word::from_canonical(out)
}

fn gen_index_for_factor(gen_factor: &[(u8, i64)], f: u8, sign: i64) -> Option<Gen> {
    gen_factor
        .iter()
        .position(|&(gf, gs)| gf == f && gs == sign)
        .map(|i| i as Gen)
}

fn normalize_lattice(letters: &[Gen], dim: u8, gens: &GeneratorSet) -> Word {
    let mut coords = vec![0i64; dim as usize];
    for &g in letters {
        let axis = (g / 2) as usize;
        if g % 2 == 0 {
            coords[axis] += 1;
        } else {
            coords[axis] -= 1;
        }
    }
    let mut out = Vec::new();
    for (axis, &v) in coords.iter().enumerate() {
        let g = (axis * 2) as Gen;
        let (sym, count) = if v >= 0 { (g, v) } else { (gens.inverse(g), -v) };
        for _ in 0..count {
            out.push(sym);
        }
    }
    Word::from_canonical(out)
}

#[cfg(test)]
mod tests;
