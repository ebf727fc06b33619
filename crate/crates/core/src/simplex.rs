//! Maps of the simplex category `Δ` (objects `[n] = {0..n}`) and of the
//! augmented category `Δ̲` (objects `n̲ = {1..n}`, including the empty `0̲`).

use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SimplexError {
    #[error("values are not weakly increasing")]
    NotMonotone,
    #[error("value {value} lies outside the target {target}")]
    OutOfRange { value: usize, target: usize },
    #[error("a map in Δ needs at least one value")]
    EmptySource,
    #[error("map {0} is not generic")]
    NotGeneric(String),
    #[error("map {0} is not free")]
    NotFree(String),
    #[error("map {0} is not convex")]
    NotConvex(String),
    #[error("maps are not composable: {0}")]
    NotComposable(String),
    #[error("square does not commute")]
    NotCommuting,
}

fn check_monotone(values: &[usize], lo: usize, hi: usize) -> Result<(), SimplexError> {
    for &v in values {
        if v < lo || v > hi {
            return Err(SimplexError::OutOfRange { value: v, target: hi });
        }
    }
    if values.windows(2).any(|w| w[0] > w[1]) {
        return Err(SimplexError::NotMonotone);
    }
    Ok(())
}

/// All weakly increasing sequences of length `len` with entries in `lo..=hi`.
fn monotone_sequences(len: usize, lo: usize, hi: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur = Vec::with_capacity(len);
    fn go(len: usize, from: usize, hi: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == len {
            out.push(cur.clone());
            return;
        }
        for v in from..=hi {
            cur.push(v);
            go(len, v, hi, cur, out);
            cur.pop();
        }
    }
    if len == 0 {
        return vec![Vec::new()];
    }
    if lo > hi {
        return out;
    }
    go(len, lo, hi, &mut cur, &mut out);
    out
}

/// A monotone map `[m] → [n]`, stored as its `m + 1` values.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct DeltaMap {
    target: usize,
    values: Vec<usize>,
}

/// A monotone map `m̲ → n̲`, stored as its `m` values in `1..=n`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct UlDeltaMap {
    target: usize,
    values: Vec<usize>,
}

/// One coface or codegeneracy map of `Δ`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Elementary {
    /// `d^k : [n] → [n+1]`, skipping `k`.
    Coface { n: usize, k: usize },
    /// `s^k : [n+1] → [n]`, repeating `k`.
    Codegeneracy { n: usize, k: usize },
}

impl Elementary {
    pub fn to_map(self) -> DeltaMap {
        match self {
            Elementary::Coface { n, k } => DeltaMap::coface(n, k),
            Elementary::Codegeneracy { n, k } => DeltaMap::codegeneracy(n, k),
        }
    }
}

impl DeltaMap {
    pub fn new(target: usize, values: Vec<usize>) -> Result<Self, SimplexError> {
        if values.is_empty() {
            return Err(SimplexError::EmptySource);
        }
        check_monotone(&values, 0, target)?;
        Ok(Self { target, values })
    }

    pub fn source(&self) -> usize {
        self.values.len() - 1
    }

    pub fn target(&self) -> usize {
        self.target
    }

    pub fn values(&self) -> &[usize] {
        &self.values
    }

    pub fn apply(&self, i: usize) -> usize {
        self.values[i]
    }

    pub fn identity(n: usize) -> Self {
        Self { target: n, values: (0..=n).collect() }
    }

    /// `d^k : [n] → [n+1]` for `k ≤ n + 1`.
    pub fn coface(n: usize, k: usize) -> Self {
        assert!(k <= n + 1, "coface index {k} out of range for [{n}]");
        Self { target: n + 1, values: (0..=n).map(|i| if i < k { i } else { i + 1 }).collect() }
    }

    /// `s^k : [n+1] → [n]` for `k ≤ n`.
    pub fn codegeneracy(n: usize, k: usize) -> Self {
        assert!(k <= n, "codegeneracy index {k} out of range for [{n}]");
        Self { target: n, values: (0..=n + 1).map(|i| if i <= k { i } else { i - 1 }).collect() }
    }

    /// The free map `[k] → [n]` given by `i ↦ i + offset`.
    pub fn free_inclusion(k: usize, offset: usize, n: usize) -> Self {
        assert!(offset + k <= n);
        Self { target: n, values: (0..=k).map(|i| i + offset).collect() }
    }

    /// Every monotone map `[m] → [n]`.
    pub fn all(m: usize, n: usize) -> Vec<Self> {
        monotone_sequences(m + 1, 0, n).into_iter().map(|values| Self { target: n, values }).collect()
    }

    /// `self ∘ first`.
    pub fn compose(&self, first: &DeltaMap) -> Result<DeltaMap, SimplexError> {
        if first.target != self.source() {
            return Err(SimplexError::NotComposable(format!("{self} ∘ {first}")));
        }
        Ok(DeltaMap { target: self.target, values: first.values.iter().map(|&v| self.values[v]).collect() })
    }

    pub fn is_generic(&self) -> bool {
        self.values[0] == 0 && self.values[self.source()] == self.target
    }

    pub fn is_free(&self) -> bool {
        self.values.windows(2).all(|w| w[1] == w[0] + 1)
    }

    pub fn is_identity(&self) -> bool {
        self.target == self.source() && self.is_free()
    }

    pub fn is_injective(&self) -> bool {
        self.values.windows(2).all(|w| w[0] < w[1])
    }

    pub fn is_surjective(&self) -> bool {
        self.values[0] == 0
            && self.values[self.source()] == self.target
            && self.values.windows(2).all(|w| w[1] <= w[0] + 1)
    }

    /// The unique factorization `self = free ∘ generic`.
    pub fn generic_free_factorize(&self) -> (DeltaMap, DeltaMap) {
        let lo = self.values[0];
        let hi = self.values[self.source()];
        let generic = DeltaMap { target: hi - lo, values: self.values.iter().map(|v| v - lo).collect() };
        let free = DeltaMap::free_inclusion(hi - lo, lo, self.target);
        (generic, free)
    }

    /// Cofaces and codegeneracies composing to `self`, listed in the order they
    /// are applied: codegeneracies first, then cofaces with increasing index.
    pub fn elementary_word(&self) -> Vec<Elementary> {
        let mut word = Vec::new();
        let mut image: Vec<usize> = self.values.clone();
        image.dedup();
        let mut cur: Vec<usize> = self.values.iter().map(|v| image.binary_search(v).expect("value in image")).collect();
        while let Some(i) = (0..cur.len() - 1).rev().find(|&i| cur[i] == cur[i + 1]) {
            word.push(Elementary::Codegeneracy { n: cur.len() - 2, k: i });
            cur.remove(i + 1);
        }
        let p = image.len() - 1;
        let skipped: Vec<usize> = (0..=self.target).filter(|c| image.binary_search(c).is_err()).collect();
        for (idx, &c) in skipped.iter().enumerate() {
            word.push(Elementary::Coface { n: p + idx, k: c });
        }
        word
    }

    /// Joyal dual of a generic map `[m] → [n]`: the map `n̲ → m̲` sending `j`
    /// to the unique `i` with `g(i-1) < j ≤ g(i)`.
    pub fn joyal_dual(&self) -> Result<UlDeltaMap, SimplexError> {
        if !self.is_generic() {
            return Err(SimplexError::NotGeneric(self.to_string()));
        }
        let m = self.source();
        let values = (1..=self.target)
            .map(|j| (1..=m).find(|&i| self.values[i - 1] < j && j <= self.values[i]).expect("generic map covers"))
            .collect();
        Ok(UlDeltaMap { target: m, values })
    }

    /// The convex map `k̲ ↣ n̲` matching a free map `[k] → [n]`. Every map out
    /// of `[0]` goes to the unique map `0̲ → n̲`.
    pub fn free_to_convex(&self) -> Result<UlDeltaMap, SimplexError> {
        if !self.is_free() {
            return Err(SimplexError::NotFree(self.to_string()));
        }
        let offset = self.values[0];
        Ok(UlDeltaMap { target: self.target, values: (1..=self.source()).map(|j| j + offset).collect() })
    }
}

impl fmt::Display for DeltaMap {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}:[{}]->[{}]", self.values, self.source(), self.target)
    }
}

impl UlDeltaMap {
    pub fn new(target: usize, values: Vec<usize>) -> Result<Self, SimplexError> {
        check_monotone(&values, 1, target)?;
        Ok(Self { target, values })
    }

    pub fn source(&self) -> usize {
        self.values.len()
    }

    pub fn target(&self) -> usize {
        self.target
    }

    pub fn values(&self) -> &[usize] {
        &self.values
    }

    /// Image of `x ∈ 1..=source`.
    pub fn apply(&self, x: usize) -> usize {
        self.values[x - 1]
    }

    pub fn identity(n: usize) -> Self {
        Self { target: n, values: (1..=n).collect() }
    }

    /// The unique map `0̲ → n̲`.
    pub fn from_empty(n: usize) -> Self {
        Self { target: n, values: Vec::new() }
    }

    /// `d̲^k : n̲ → n+1̲` for `k ≤ n`, skipping `k + 1`.
    pub fn coface(n: usize, k: usize) -> Self {
        assert!(k <= n, "coface index {k} out of range for {n}");
        Self { target: n + 1, values: (1..=n).map(|x| if x <= k { x } else { x + 1 }).collect() }
    }

    /// `s̲^k : n+1̲ → n̲` for `k < n`, repeating `k + 1`.
    pub fn codegeneracy(n: usize, k: usize) -> Self {
        assert!(k < n, "codegeneracy index {k} out of range for {n}");
        Self { target: n, values: (1..=n + 1).map(|x| if x <= k + 1 { x } else { x - 1 }).collect() }
    }

    /// The convex inclusion `k̲ ↣ n̲` at `offset`.
    pub fn convex_inclusion(k: usize, offset: usize, n: usize) -> Self {
        assert!(offset + k <= n);
        Self { target: n, values: (1..=k).map(|x| x + offset).collect() }
    }

    /// Every monotone map `m̲ → n̲`.
    pub fn all(m: usize, n: usize) -> Vec<Self> {
        monotone_sequences(m, 1, n).into_iter().map(|values| Self { target: n, values }).collect()
    }

    /// `self ∘ first`.
    pub fn compose(&self, first: &UlDeltaMap) -> Result<UlDeltaMap, SimplexError> {
        if first.target != self.source() {
            return Err(SimplexError::NotComposable(format!("{self} ∘ {first}")));
        }
        Ok(UlDeltaMap { target: self.target, values: first.values.iter().map(|&v| self.values[v - 1]).collect() })
    }

    /// Ordinal sum `self + other`.
    pub fn plus(&self, other: &UlDeltaMap) -> UlDeltaMap {
        let mut values = self.values.clone();
        values.extend(other.values.iter().map(|v| v + self.target));
        UlDeltaMap { target: self.target + other.target, values }
    }

    pub fn is_convex(&self) -> bool {
        self.values.windows(2).all(|w| w[1] == w[0] + 1)
    }

    pub fn is_injective(&self) -> bool {
        self.values.windows(2).all(|w| w[0] < w[1])
    }

    /// Offset `a` of a convex map `n̲ ↣ a + n + b`; `None` out of `0̲`.
    pub fn offset(&self) -> Option<usize> {
        self.values.first().map(|v| v - 1)
    }

    /// Inverse of Joyal duality: the generic map `[m] → [n]` dual to
    /// `self : n̲ → m̲`, given by `i ↦ #{j : self(j) ≤ i}`.
    pub fn joyal_inverse(&self) -> DeltaMap {
        let values = (0..=self.target).map(|i| self.values.iter().filter(|&&v| v <= i).count()).collect();
        DeltaMap { target: self.source(), values }
    }

    /// Inverse of [`DeltaMap::free_to_convex`] for sources `k ≥ 1`.
    pub fn convex_to_free(&self) -> Result<DeltaMap, SimplexError> {
        if !self.is_convex() || self.values.is_empty() {
            return Err(SimplexError::NotConvex(self.to_string()));
        }
        let offset = self.values[0] - 1;
        Ok(DeltaMap::free_inclusion(self.source(), offset, self.target))
    }
}

impl fmt::Display for UlDeltaMap {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}:{}->{}", self.values, self.source(), self.target)
    }
}

/// Pullback of a convex map along an arbitrary map.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ConvexPullback {
    pub apex: usize,
    /// Convex leg into the source of `f`.
    pub j: UlDeltaMap,
    /// Leg into the source of `i`.
    pub f0: UlDeltaMap,
}

/// Pull the convex map `i` back along `f`; the apex is the preimage of the
/// image interval of `i`.
pub fn pullback_convex_ul(f: &UlDeltaMap, i: &UlDeltaMap) -> Result<ConvexPullback, SimplexError> {
    if !i.is_convex() {
        return Err(SimplexError::NotConvex(i.to_string()));
    }
    if f.target() != i.target() {
        return Err(SimplexError::NotComposable(format!("cospan {f}, {i}")));
    }
    let a = i.offset().unwrap_or(0);
    let k = i.source();
    let below = f.values().iter().filter(|&&v| v <= a).count();
    let apex = f.values().iter().filter(|&&v| a < v && v <= a + k).count();
    let j = UlDeltaMap::convex_inclusion(apex, below, f.source());
    let f0 = UlDeltaMap { target: k, values: (1..=apex).map(|x| f.apply(below + x) - a).collect() };
    Ok(ConvexPullback { apex, j, f0 })
}

/// Whether the commuting square
///
/// ```text
///   B ←j─ N
///   │g     │f
///   K'←i─ K
/// ```
/// is a pullback, tested against every cone with apex at most `cone_bound`.
pub fn is_pullback_ul(j: &UlDeltaMap, f: &UlDeltaMap, g: &UlDeltaMap, i: &UlDeltaMap, cone_bound: usize) -> bool {
    (0..=cone_bound).all(|p| {
        UlDeltaMap::all(p, g.source()).iter().all(|u| {
            UlDeltaMap::all(p, i.source()).iter().all(|v| {
                if g.compose(u).ok() != i.compose(v).ok() {
                    return true;
                }
                UlDeltaMap::all(p, j.source())
                    .iter()
                    .filter(|w| j.compose(w).ok().as_ref() == Some(u) && f.compose(w).ok().as_ref() == Some(v))
                    .count()
                    == 1
            })
        })
    })
}

/// Whether the same square is a pushout of the span `(j, f)`, tested
/// against every cocone with apex at most `cone_bound`.
pub fn is_pushout_ul(j: &UlDeltaMap, f: &UlDeltaMap, g: &UlDeltaMap, i: &UlDeltaMap, cone_bound: usize) -> bool {
    (0..=cone_bound).all(|q| {
        UlDeltaMap::all(g.source(), q).iter().all(|u| {
            UlDeltaMap::all(i.source(), q).iter().all(|v| {
                if u.compose(j).ok() != v.compose(f).ok() {
                    return true;
                }
                UlDeltaMap::all(g.target(), q)
                    .iter()
                    .filter(|w| w.compose(g).ok().as_ref() == Some(u) && w.compose(i).ok().as_ref() == Some(v))
                    .count()
                    == 1
            })
        })
    })
}

/// An identity-extension square
///
/// ```text
///   a+n+b ←j─ n
///     │id+f+id │f
///   a+k+b ←i─ k
/// ```
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct IesqSquare {
    pub a: usize,
    pub b: usize,
    /// The middle map `n̲ → k̲`.
    pub f: UlDeltaMap,
}

/// A commuting square of generic (vertical) against free (horizontal) maps
/// in `Δ`:
///
/// ```text
///   [a+n+b] ←top─ [n]
///     ↑left         ↑right
///   [a+k+b] ←bottom─ [k]
/// ```
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GenericFreeSquare {
    pub top: DeltaMap,
    pub bottom: DeltaMap,
    pub left: DeltaMap,
    pub right: DeltaMap,
}

impl GenericFreeSquare {
    pub fn commutes(&self) -> bool {
        self.left.compose(&self.bottom).ok() == self.top.compose(&self.right).ok()
    }
}

impl IesqSquare {
    pub fn new(a: usize, b: usize, f: UlDeltaMap) -> Self {
        Self { a, b, f }
    }

    pub fn n(&self) -> usize {
        self.f.source()
    }

    pub fn k(&self) -> usize {
        self.f.target()
    }

    /// Left arm `id_a + f + id_b`.
    pub fn g(&self) -> UlDeltaMap {
        UlDeltaMap::identity(self.a).plus(&self.f).plus(&UlDeltaMap::identity(self.b))
    }

    pub fn j(&self) -> UlDeltaMap {
        UlDeltaMap::convex_inclusion(self.n(), self.a, self.a + self.n() + self.b)
    }

    pub fn i(&self) -> UlDeltaMap {
        UlDeltaMap::convex_inclusion(self.k(), self.a, self.a + self.k() + self.b)
    }

    /// The generic-free square of `Δ` corresponding to this square.
    pub fn delta_square(&self) -> GenericFreeSquare {
        let (a, b, n, k) = (self.a, self.b, self.n(), self.k());
        GenericFreeSquare {
            top: DeltaMap::free_inclusion(n, a, a + n + b),
            bottom: DeltaMap::free_inclusion(k, a, a + k + b),
            left: self.g().joyal_inverse(),
            right: self.f.joyal_inverse(),
        }
    }

    /// Largest simplicial level touched by the square.
    pub fn top_level(&self) -> usize {
        self.a + self.b + self.n().max(self.k())
    }
}

impl fmt::Display for IesqSquare {
    fn fmt(&self, fm: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(fm, "a{}-b{}-f{:?}:{}->{}", self.a, self.b, self.f.values(), self.n(), self.k())
    }
}

/// Decide whether a commuting square with convex horizontals has the
/// identity-extension shape.
pub fn is_iesq(g: &UlDeltaMap, f: &UlDeltaMap, j: &UlDeltaMap, i: &UlDeltaMap) -> Result<bool, SimplexError> {
    let shaped =
        j.source() == f.source() && f.target() == i.source() && g.source() == j.target() && g.target() == i.target();
    if !shaped {
        return Err(SimplexError::NotComposable("square corners do not match".into()));
    }
    if g.compose(j)? != i.compose(f)? {
        return Err(SimplexError::NotCommuting);
    }
    for m in [j, i] {
        if !m.is_convex() {
            return Err(SimplexError::NotConvex(m.to_string()));
        }
    }
    let (n, k) = (f.source(), f.target());
    let fits = |a: usize| {
        if a + n > j.target() || a + k > i.target() {
            return false;
        }
        let b = j.target() - a - n;
        i.target() == a + k + b
            && j.offset().is_none_or(|o| o == a)
            && i.offset().is_none_or(|o| o == a)
            && IesqSquare::new(a, b, f.clone()).g() == *g
    };
    Ok((0..=j.target()).any(fits))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct IesqBounds {
    pub max_a: usize,
    pub max_b: usize,
    pub max_n: usize,
    pub max_k: usize,
}

impl IesqBounds {
    pub fn uniform(bound: usize) -> Self {
        Self { max_a: bound, max_b: bound, max_n: bound, max_k: bound }
    }
}

/// All identity-extension squares within `bounds`.
pub fn enumerate_iesq(bounds: IesqBounds) -> Vec<IesqSquare> {
    let mut out = Vec::new();
    for a in 0..=bounds.max_a {
        for b in 0..=bounds.max_b {
            for n in 0..=bounds.max_n {
                for k in 0..=bounds.max_k {
                    for f in UlDeltaMap::all(n, k) {
                        out.push(IesqSquare::new(a, b, f));
                    }
                }
            }
        }
    }
    out
}

/// Identity-extension squares whose corners all lie at levels `≤ top`.
pub fn iesq_up_to_level(top: usize) -> Vec<IesqSquare> {
    enumerate_iesq(IesqBounds::uniform(top)).into_iter().filter(|sq| sq.top_level() <= top).collect()
}
