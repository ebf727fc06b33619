//! Canonical forms, isomorphisms and automorphism counts for small coloured
//! relational structures. Posets, species decorations and layerings are all
//! encoded as one of these.

use std::fmt;
use std::sync::OnceLock;

use serde::{Deserialize, Serialize};

/// Largest carrier for which canonical keys are certified, overridable
/// through `DSPEC_SIZE_CAP`.
pub fn size_cap() -> usize {
    static CAP: OnceLock<usize> = OnceLock::new();
    *CAP.get_or_init(|| std::env::var("DSPEC_SIZE_CAP").ok().and_then(|v| v.trim().parse().ok()).unwrap_or(10))
}

/// Opaque iso-class key, rendered as `tag:hex`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct CanonicalKey(String);

impl CanonicalKey {
    pub fn new(tag: &str, bytes: &[u8]) -> Self {
        Self(format!("{tag}:{}", hex::encode(bytes)))
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }

    pub fn tag(&self) -> &str {
        self.0.split_once(':').map_or("", |(t, _)| t)
    }

    /// Carrier size recorded in the key.
    pub fn size(&self) -> usize {
        let payload = self.0.split_once(':').map_or("", |(_, p)| p);
        hex::decode(payload.get(..2).unwrap_or("00")).ok().and_then(|b| b.first().copied()).unwrap_or(0) as usize
    }

    pub fn from_string(s: String) -> Self {
        Self(s)
    }
}

impl fmt::Display for CanonicalKey {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

/// Vertices `0..n` with colours and square relation matrices (row-major).
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Relational {
    n: usize,
    colors: Vec<u32>,
    rels: Vec<Vec<u8>>,
}

impl Relational {
    pub fn new(n: usize, colors: Vec<u32>, rels: Vec<Vec<u8>>) -> Self {
        assert_eq!(colors.len(), n);
        assert!(rels.iter().all(|r| r.len() == n * n));
        Self { n, colors, rels }
    }

    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        self.n == 0
    }

    #[inline]
    fn at(&self, r: usize, i: usize, j: usize) -> u8 {
        self.rels[r][i * self.n + j]
    }

    /// Canonical byte encoding: equal for two structures iff they are
    /// isomorphic.
    pub fn canonical_form(&self) -> Vec<u8> {
        let ranks = refine_joint(&[self]).pop().expect("one structure");
        let mut order: Vec<usize> = (0..self.n).collect();
        order.sort_by_key(|&v| ranks[v]);
        let slot_rank: Vec<u32> = order.iter().map(|&v| ranks[v]).collect();
        let twins = self.twin_classes();

        let mut search = CanonSearch {
            s: self,
            ranks: &ranks,
            slot_rank: &slot_rank,
            twins: &twins,
            used: vec![false; self.n],
            placed: Vec::with_capacity(self.n),
            cur: Vec::new(),
            best: None,
        };
        search.go();
        let body = search.best.unwrap_or_default();

        let mut out = Vec::with_capacity(body.len() + 1);
        out.push(u8::try_from(self.n).expect("carrier fits a byte"));
        out.extend(body);
        out
    }

    /// Twin class of every vertex: `u ~ v` iff swapping them is an
    /// automorphism.
    fn twin_classes(&self) -> Vec<usize> {
        let mut class = vec![usize::MAX; self.n];
        for u in 0..self.n {
            if class[u] != usize::MAX {
                continue;
            }
            class[u] = u;
            for (v, cv) in class.iter_mut().enumerate().skip(u + 1) {
                if *cv == usize::MAX && self.are_twins(u, v) {
                    *cv = u;
                }
            }
        }
        class
    }

    fn are_twins(&self, u: usize, v: usize) -> bool {
        if self.colors[u] != self.colors[v] {
            return false;
        }
        (0..self.rels.len()).all(|r| {
            self.at(r, u, u) == self.at(r, v, v)
                && self.at(r, u, v) == self.at(r, v, u)
                && (0..self.n)
                    .filter(|&w| w != u && w != v)
                    .all(|w| self.at(r, u, w) == self.at(r, v, w) && self.at(r, w, u) == self.at(r, w, v))
        })
    }

    /// All isomorphisms `self → other`, as vectors `map[i] = image of i`.
    pub fn isomorphisms(&self, other: &Relational) -> Vec<Vec<usize>> {
        let mut out = Vec::new();
        if let Some(mut s) = IsoSearch::new(self, other) {
            s.run(&mut |m| {
                out.push(m.to_vec());
                true
            });
        }
        out
    }

    pub fn is_isomorphic(&self, other: &Relational) -> bool {
        self.find_isomorphism(other, &[]).is_some()
    }

    /// Some isomorphism extending the prescribed pairs.
    pub fn find_isomorphism(&self, other: &Relational, fixed: &[(usize, usize)]) -> Option<Vec<usize>> {
        let mut s = IsoSearch::new(self, other)?;
        for &(a, b) in fixed {
            if !s.try_assign(a, b) {
                return None;
            }
        }
        let mut found = None;
        s.run(&mut |m| {
            found = Some(m.to_vec());
            false
        });
        found
    }

    /// Order of the automorphism group, by orbit–stabilizer.
    pub fn automorphism_count(&self) -> u64 {
        let ranks = refine_joint(&[self]).pop().expect("one structure");
        let mut order: Vec<usize> = (0..self.n).collect();
        order.sort_by_key(|&v| ranks[v]);
        let mut fixed: Vec<(usize, usize)> = Vec::new();
        let mut count = 1u64;
        for &v in &order {
            let orbit = (0..self.n)
                .filter(|&u| ranks[u] == ranks[v])
                .filter(|&u| {
                    let mut pairs = fixed.clone();
                    pairs.push((v, u));
                    self.find_isomorphism(self, &pairs).is_some()
                })
                .count() as u64;
            count *= orbit;
            fixed.push((v, v));
        }
        count
    }
}

struct CanonSearch<'a> {
    s: &'a Relational,
    ranks: &'a [u32],
    slot_rank: &'a [u32],
    twins: &'a [usize],
    used: Vec<bool>,
    placed: Vec<usize>,
    cur: Vec<u8>,
    best: Option<Vec<u8>>,
}

impl CanonSearch<'_> {
    fn push_block(&mut self, v: usize) {
        let s = self.s;
        self.cur.extend_from_slice(&s.colors[v].to_le_bytes());
        for r in 0..s.rels.len() {
            self.cur.push(s.at(r, v, v));
            for &u in &self.placed {
                self.cur.push(s.at(r, v, u));
                self.cur.push(s.at(r, u, v));
            }
        }
    }

    fn go(&mut self) {
        let t = self.placed.len();
        if t == self.s.n {
            if self.best.as_ref().is_none_or(|b| self.cur < *b) {
                self.best = Some(self.cur.clone());
            }
            return;
        }
        let want = self.slot_rank[t];
        let mut tried_classes: Vec<usize> = Vec::new();
        for v in 0..self.s.n {
            if self.used[v] || self.ranks[v] != want || tried_classes.contains(&self.twins[v]) {
                continue;
            }
            tried_classes.push(self.twins[v]);
            let mark = self.cur.len();
            self.push_block(v);
            let prune = self.best.as_ref().is_some_and(|b| self.cur[..] > b[..self.cur.len()]);
            if !prune {
                self.used[v] = true;
                self.placed.push(v);
                self.go();
                self.placed.pop();
                self.used[v] = false;
            }
            self.cur.truncate(mark);
        }
    }
}

/// Colour refinement run jointly, so that ranks are comparable across the
/// given structures.
pub(crate) fn refine_joint(structs: &[&Relational]) -> Vec<Vec<u32>> {
    type Sig = (u32, Vec<(u32, Vec<u8>)>);
    let initial: Vec<Vec<(u32, Vec<u8>)>> = structs
        .iter()
        .map(|s| (0..s.n).map(|v| (s.colors[v], (0..s.rels.len()).map(|r| s.at(r, v, v)).collect())).collect())
        .collect();
    let mut ranks = rank_all(&initial);
    let mut classes = count_classes(&ranks);
    loop {
        let sigs: Vec<Vec<Sig>> = structs
            .iter()
            .zip(&ranks)
            .map(|(s, rk)| {
                (0..s.n)
                    .map(|v| {
                        let mut nb: Vec<(u32, Vec<u8>)> = (0..s.n)
                            .filter(|&u| u != v)
                            .map(|u| {
                                let mut e = Vec::with_capacity(2 * s.rels.len());
                                for r in 0..s.rels.len() {
                                    e.push(s.at(r, v, u));
                                    e.push(s.at(r, u, v));
                                }
                                (rk[u], e)
                            })
                            .collect();
                        nb.sort();
                        (rk[v], nb)
                    })
                    .collect()
            })
            .collect();
        let next = rank_all(&sigs);
        let next_classes = count_classes(&next);
        ranks = next;
        if next_classes == classes {
            return ranks;
        }
        classes = next_classes;
    }
}

fn rank_all<T: Ord + Clone>(sigs: &[Vec<T>]) -> Vec<Vec<u32>> {
    let mut all: Vec<T> = sigs.iter().flatten().cloned().collect();
    all.sort();
    all.dedup();
    sigs.iter().map(|v| v.iter().map(|s| all.binary_search(s).expect("present") as u32).collect()).collect()
}

fn count_classes(ranks: &[Vec<u32>]) -> usize {
    let mut all: Vec<u32> = ranks.iter().flatten().copied().collect();
    all.sort_unstable();
    all.dedup();
    all.len()
}

struct IsoSearch<'a> {
    a: &'a Relational,
    b: &'a Relational,
    ra: Vec<u32>,
    rb: Vec<u32>,
    order: Vec<usize>,
    map: Vec<usize>,
    used: Vec<bool>,
}

impl<'a> IsoSearch<'a> {
    fn new(a: &'a Relational, b: &'a Relational) -> Option<Self> {
        if a.n != b.n || a.rels.len() != b.rels.len() {
            return None;
        }
        let mut rk = refine_joint(&[a, b]);
        let rb = rk.pop().expect("two");
        let ra = rk.pop().expect("two");
        let mut sa = ra.clone();
        let mut sb = rb.clone();
        sa.sort_unstable();
        sb.sort_unstable();
        if sa != sb {
            return None;
        }
        let mut order: Vec<usize> = (0..a.n).collect();
        let cell = |r: u32| ra.iter().filter(|&&x| x == r).count();
        order.sort_by_key(|&v| (cell(ra[v]), ra[v]));
        Some(Self { a, b, ra, rb, order, map: vec![usize::MAX; a.n], used: vec![false; a.n] })
    }

    fn consistent(&self, x: usize, y: usize) -> bool {
        if self.ra[x] != self.rb[y] || self.used[y] || self.a.colors[x] != self.b.colors[y] {
            return false;
        }
        (0..self.a.rels.len()).all(|r| {
            self.a.at(r, x, x) == self.b.at(r, y, y)
                && (0..self.a.n).all(|u| {
                    let w = self.map[u];
                    w == usize::MAX
                        || (self.a.at(r, x, u) == self.b.at(r, y, w) && self.a.at(r, u, x) == self.b.at(r, w, y))
                })
        })
    }

    fn try_assign(&mut self, x: usize, y: usize) -> bool {
        if self.map[x] != usize::MAX {
            return self.map[x] == y;
        }
        if !self.consistent(x, y) {
            return false;
        }
        self.map[x] = y;
        self.used[y] = true;
        true
    }

    /// Visit complete isomorphisms; the visitor returns `false` to stop.
    fn run(&mut self, visit: &mut dyn FnMut(&[usize]) -> bool) -> bool {
        let Some(&x) = self.order.iter().find(|&&v| self.map[v] == usize::MAX) else {
            return visit(&self.map);
        };
        for y in 0..self.b.n {
            if self.consistent(x, y) {
                self.map[x] = y;
                self.used[y] = true;
                let go_on = self.run(visit);
                self.map[x] = usize::MAX;
                self.used[y] = false;
                if !go_on {
                    return false;
                }
            }
        }
        true
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn permute(s: &Relational, p: &[usize]) -> Relational {
        let n = s.n;
        let mut colors = vec![0; n];
        for i in 0..n {
            colors[p[i]] = s.colors[i];
        }
        let rels = s
            .rels
            .iter()
            .map(|m| {
                let mut out = vec![0; n * n];
                for i in 0..n {
                    for j in 0..n {
                        out[p[i] * n + p[j]] = m[i * n + j];
                    }
                }
                out
            })
            .collect();
        Relational::new(n, colors, rels)
    }

    fn all_perms(n: usize) -> Vec<Vec<usize>> {
        if n == 0 {
            return vec![vec![]];
        }
        let mut out = Vec::new();
        for p in all_perms(n - 1) {
            for pos in 0..=p.len() {
                let mut q = p.clone();
                q.insert(pos, n - 1);
                out.push(q);
            }
        }
        out
    }

    fn digraph(n: usize, edges: &[(usize, usize)]) -> Relational {
        let mut m = vec![0; n * n];
        for &(a, b) in edges {
            m[a * n + b] += 1;
        }
        Relational::new(n, vec![0; n], vec![m])
    }

    #[test]
    fn canonical_form_is_invariant() {
        let g = digraph(5, &[(0, 1), (1, 2), (3, 4), (0, 4), (2, 2)]);
        let c = g.canonical_form();
        for p in all_perms(5) {
            assert_eq!(permute(&g, &p).canonical_form(), c);
        }
    }

    #[test]
    fn automorphisms_of_symmetric_structures() {
        let discrete = Relational::new(6, vec![0; 6], vec![vec![0; 36]]);
        assert_eq!(discrete.automorphism_count(), 720);
        let cycle = digraph(4, &[(0, 1), (1, 0), (1, 2), (2, 1), (2, 3), (3, 2), (3, 0), (0, 3)]);
        assert_eq!(cycle.automorphism_count(), 8);
        assert_eq!(cycle.isomorphisms(&cycle).len(), 8);
    }

    #[test]
    fn brute_force_oracle_on_small_digraphs() {
        // All simple digraphs on 3 vertices: keys agree iff a bijection exists.
        let pairs: Vec<(usize, usize)> =
            (0..3).flat_map(|a| (0..3).map(move |b| (a, b))).filter(|(a, b)| a != b).collect();
        let graphs: Vec<Relational> = (0..1u32 << pairs.len())
            .map(|mask| {
                let e: Vec<_> = pairs.iter().enumerate().filter(|(i, _)| mask >> i & 1 == 1).map(|(_, p)| *p).collect();
                digraph(3, &e)
            })
            .collect();
        let perms = all_perms(3);
        for x in &graphs {
            for y in &graphs {
                let brute = perms.iter().any(|p| permute(x, p) == *y);
                assert_eq!(x.canonical_form() == y.canonical_form(), brute);
                assert_eq!(x.is_isomorphic(y), brute);
            }
            let brute_aut = perms.iter().filter(|p| permute(x, p) == *x).count() as u64;
            assert_eq!(x.automorphism_count(), brute_aut);
        }
    }

    #[test]
    fn key_rendering() {
        let k = CanonicalKey::new("poset", &[3, 0xab]);
        assert_eq!(k.as_str(), "poset:03ab");
        assert_eq!(k.tag(), "poset");
        assert_eq!(k.size(), 3);
    }
}
