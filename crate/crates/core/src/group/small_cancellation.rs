//! C'(1/6) small-cancellation backend.
//!
//! Dehn's greedy algorithm decides the word problem: a freely reduced word
//! represents the identity iff it contains more than half of some cyclic
//! conjugate of a relator (or an inverse), and replacing such a subword by
//! the inverse of the complement strictly shortens the word.
//!
//! Dehn-reduced words are not unique per element, so canonical forms are
//! produced by a shortlex BFS over the Cayley graph with Dehn-powered
//! equality tests. The table is grown lazily, layer by layer, under a lock;
//! growth order is deterministic regardless of the calling thread.

use super::{Gen, GeneratorSet, Word};
use crate::error::{Error, Result};
use std::collections::HashMap;
use std::sync::Mutex;

/// Hard cap on interned elements; normal-form queries beyond it surface as
/// budget errors rather than runaway memory.
const INTERN_BUDGET: usize = 400_000;

#[derive(Debug)]
pub(super) struct SmallCancData {
    /// all cyclic rotations of every relator and every inverse relator
    rotations: Vec<Vec<Gen>>,
    /// generator -> inverse (copied out of the GeneratorSet for hot loops)
    inverse: Vec<Gen>,
    /// generator -> index of its {g, g^-1} pair
    axis: Vec<u8>,
    /// row-echelon basis of relator exponent vectors mod 2
    f2_basis: Vec<u64>,
    pub(super) max_piece: usize,
    intern: Mutex<InternTable>,
}

#[derive(Debug)]
struct InternTable {
    words: Vec<Vec<Gen>>,
    dist: Vec<u32>,
    /// (distance, reduced parity class) -> element ids
    buckets: HashMap<(u32, u64), Vec<u32>>,
    /// element id ranges per distance; layer_start[d]..layer_start[d+1]
    layer_start: Vec<usize>,
    complete_radius: u32,
}

impl SmallCancData {
    pub(super) fn new(gens: &GeneratorSet, relators: Vec<Vec<Gen>>) -> Result<SmallCancData> {
        if relators.is_empty() {
            return Err(Error::InvalidSpec("small cancellation needs relators".into()));
        }
        let inverse: Vec<Gen> = gens.iter().map(|g| gens.inverse(g)).collect();
        for g in gens.iter() {
            if inverse[g as usize] == g {
                return Err(Error::InvalidSpec(
                    "small-cancellation generators must come in distinct inverse pairs".into(),
                ));
            }
        }
        let mut axis = vec![0u8; gens.len()];
        let mut next_axis = 0u8;
        for g in gens.iter() {
            if g < inverse[g as usize] {
                axis[g as usize] = next_axis;
                axis[inverse[g as usize] as usize] = next_axis;
                next_axis += 1;
            }
        }
        if next_axis as usize > 64 {
            return Err(Error::InvalidSpec("at most 64 generator pairs supported".into()));
        }

        // relators must be freely and cyclically reduced
        for r in &relators {
            if r.is_empty() {
                return Err(Error::InvalidSpec("empty relator".into()));
            }
            for i in 1..r.len() {
                if r[i] == inverse[r[i - 1] as usize] {
                    return Err(Error::InvalidSpec("relator not freely reduced".into()));
                }
            }
            if r.len() > 1 && r[0] == inverse[*r.last().unwrap() as usize] {
                return Err(Error::InvalidSpec("relator not cyclically reduced".into()));
            }
        }

        // symmetrized set: all rotations of relators and inverse relators
        let mut rotations: Vec<Vec<Gen>> = Vec::new();
        for r in &relators {
            let inv_r: Vec<Gen> = r.iter().rev().map(|&g| inverse[g as usize]).collect();
            for base in [r, &inv_r] {
                for s in 0..base.len() {
                    let mut rot = base[s..].to_vec();
                    rot.extend_from_slice(&base[..s]);
                    rotations.push(rot);
                }
            }
        }
        // identical rotations mean a piece of full relator length
        let mut seen = std::collections::HashSet::new();
        for rot in &rotations {
            if !seen.insert(rot.clone()) {
                return Err(Error::InvalidSpec(
                    "C'(1/6) violated: a relator conjugate repeats (proper power or inverse symmetry)"
                        .into(),
                ));
            }
        }

        // pieces: common prefixes of distinct elements of the symmetrized set
        let mut max_piece = 0usize;
        for i in 0..rotations.len() {
            for j in (i + 1)..rotations.len() {
                let lcp = rotations[i]
                    .iter()
                    .zip(&rotations[j])
                    .take_while(|(a, b)| a == b)
                    .count();
                if 6 * lcp >= rotations[i].len().min(rotations[j].len()) {
                    return Err(Error::InvalidSpec(format!(
                        "C'(1/6) violated: piece of length {lcp} against relator of length {}",
                        rotations[i].len().min(rotations[j].len())
                    )));
                }
                max_piece = max_piece.max(lcp);
            }
        }

        // F2 span of relator exponent parities
        let mut f2_basis: Vec<u64> = Vec::new();
        for r in &relators {
            let mut m = class_mask(r, &axis);
            for &b in &f2_basis {
                let lead = 1u64 << (63 - b.leading_zeros());
                if m & lead != 0 {
                    m ^= b;
                }
            }
            if m != 0 {
                f2_basis.push(m);
                f2_basis.sort_unstable_by_key(|b| std::cmp::Reverse(*b));
            }
        }

        let mut table = InternTable {
            words: vec![Vec::new()],
            dist: vec![0],
            buckets: HashMap::new(),
            layer_start: vec![0, 1],
            complete_radius: 0,
        };
        table.buckets.insert((0, 0), vec![0]);

        Ok(SmallCancData {
            rotations,
            inverse,
            axis,
            f2_basis,
            max_piece,
            intern: Mutex::new(table),
        })
    }

    fn reduce_class(&self, mut m: u64) -> u64 {
        for &b in &self.f2_basis {
            let lead = 1u64 << (63 - b.leading_zeros());
            if m & lead != 0 {
                m ^= b;
            }
        }
        m
    }

    fn free_reduce(&self, letters: &[Gen]) -> Vec<Gen> {
        let mut out: Vec<Gen> = Vec::with_capacity(letters.len());
        for &g in letters {
            if out.last() == Some(&self.inverse[g as usize]) {
                out.pop();
            } else {
                out.push(g);
            }
        }
        out
    }

    /// Greedy Dehn reduction: leftmost position, longest replaceable match.
    pub(super) fn dehn_reduce(&self, letters: &[Gen]) -> Vec<Gen> {
        let mut w = self.free_reduce(letters);
        'outer: loop {
            for pos in 0..w.len() {
                let mut best: Option<(usize, usize)> = None; // (match_len, rot idx)
                for (ri, rot) in self.rotations.iter().enumerate() {
                    let lcp = w[pos..]
                        .iter()
                        .zip(rot)
                        .take_while(|(a, b)| a == b)
                        .count();
                    if 2 * lcp > rot.len() && best.map_or(true, |(m, _)| lcp > m) {
                        best = Some((lcp, ri));
                    }
                }
                if let Some((m, ri)) = best {
                    let rot = &self.rotations[ri];
                    let repl: Vec<Gen> = rot[m..]
                        .iter()
                        .rev()
                        .map(|&g| self.inverse[g as usize])
                        .collect();
                    let mut next = w[..pos].to_vec();
                    next.extend_from_slice(&repl);
                    next.extend_from_slice(&w[pos + m..]);
                    w = self.free_reduce(&next);
                    continue 'outer;
                }
            }
            return w;
        }
    }

    fn equal(&self, u: &[Gen], v: &[Gen]) -> bool {
        let mut cat = u.to_vec();
        cat.extend(v.iter().rev().map(|&g| self.inverse[g as usize]));
        self.dehn_reduce(&cat).is_empty()
    }

    pub(super) fn normalize(&self, gens: &GeneratorSet, letters: &[Gen]) -> Result<Word> {
        let reduced = self.dehn_reduce(letters);
        if reduced.is_empty() {
            return Ok(Word::empty());
        }
        let mut table = self.intern.lock().unwrap();
        self.grow_to(&mut table, gens, reduced.len() as u32)?;
        match self.find(&table, &reduced, reduced.len() as u32) {
            Some(id) => Ok(Word::from_canonical(table.words[id as usize].clone())),
            None => unreachable!("intern table complete to the word's Dehn length"),
        }
    }

    pub(super) fn distance_within(
        &self,
        gens: &GeneratorSet,
        letters: &[Gen],
        limit: u32,
    ) -> Result<Option<u32>> {
        let reduced = self.dehn_reduce(letters);
        if reduced.is_empty() {
            return Ok(Some(0));
        }
        let horizon = (reduced.len() as u32).min(limit);
        let mut table = self.intern.lock().unwrap();
        self.grow_to(&mut table, gens, horizon)?;
        match self.find(&table, &reduced, horizon) {
            Some(id) => {
                let d = table.dist[id as usize];
                Ok(if d <= limit { Some(d) } else { None })
            }
            None => Ok(None),
        }
    }

    /// Search interned elements at distance <= `max_d` for one equal to
    /// `word`, using the parity class to prune.
    fn find(&self, table: &InternTable, word: &[Gen], max_d: u32) -> Option<u32> {
        let class = self.reduce_class(class_mask(word, &self.axis));
        for d in (0..=max_d.min(table.complete_radius)).rev() {
            if let Some(ids) = table.buckets.get(&(d, class)) {
                for &id in ids {
                    if self.equal(word, &table.words[id as usize]) {
                        return Some(id);
                    }
                }
            }
        }
        None
    }

    fn grow_to(&self, table: &mut InternTable, gens: &GeneratorSet, radius: u32) -> Result<()> {
        while table.complete_radius < radius {
            let d = table.complete_radius;
            let lo = table.layer_start[d as usize];
            let hi = table.layer_start[d as usize + 1];
            // candidates for the new layer, deduped by group equality
            let mut new_words: Vec<Vec<Gen>> = Vec::new();
            let mut new_buckets: HashMap<u64, Vec<usize>> = HashMap::new();
            for id in lo..hi {
                for g in gens.iter() {
                    let mut letters = table.words[id].clone();
                    letters.push(g);
                    let cand = self.dehn_reduce(&letters);
                    if cand.len() as u32 <= d {
                        // distance <= d, already interned
                        continue;
                    }
                    debug_assert_eq!(cand.len() as u32, d + 1);
                    let class = self.reduce_class(class_mask(&cand, &self.axis));
                    // the element may still be closer than its spelling
                    let mut known = false;
                    for dd in [d.saturating_sub(1), d] {
                        if let Some(ids) = table.buckets.get(&(dd, class)) {
                            if ids.iter().any(|&i| self.equal(&cand, &table.words[i as usize])) {
                                known = true;
                                break;
                            }
                        }
                    }
                    if known {
                        continue;
                    }
                    match new_buckets.get(&class).and_then(|items| {
                        items.iter().copied().find(|&i| self.equal(&cand, &new_words[i]))
                    }) {
                        Some(i) => {
                            // keep the lexicographically least spelling
                            if cand < new_words[i] {
                                new_words[i] = cand;
                            }
                        }
                        None => {
                            new_buckets.entry(class).or_default().push(new_words.len());
                            new_words.push(cand);
                        }
                    }
                }
            }
            if table.words.len() + new_words.len() > INTERN_BUDGET {
                return Err(Error::BudgetExceeded {
                    what: "small-cancellation normal-form interning".into(),
                    needed: (table.words.len() + new_words.len()) as u64,
                    budget: INTERN_BUDGET as u64,
                });
            }
            new_words.sort();
            for w in new_words {
                let id = table.words.len() as u32;
                let class = self.reduce_class(class_mask(&w, &self.axis));
                table.buckets.entry((d + 1, class)).or_default().push(id);
                table.words.push(w);
                table.dist.push(d + 1);
            }
            table.layer_start.push(table.words.len());
            table.complete_radius = d + 1;
        }
        Ok(())
    }
}

fn class_mask(letters: &[Gen], axis: &[u8]) -> u64 {
    let mut m = 0u64;
    for &g in letters {
        m ^= 1u64 << axis[g as usize];
    }
    m
}
