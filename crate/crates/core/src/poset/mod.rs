//! Finite posets, convex and lower/upper subsets, layerings and canonical
//! forms.

pub mod canon;
mod json;

use std::collections::BTreeMap;

use thiserror::Error;

use crate::simplex::UlDeltaMap;
pub use canon::{size_cap, CanonicalKey, Relational};
pub use json::{LayeringJson, PosetJson};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum PosetError {
    #[error("duplicate label {0:?}")]
    DuplicateLabel(String),
    #[error("unknown label {0:?}")]
    UnknownLabel(String),
    #[error("order relation has a cycle through {0:?} and {1:?}")]
    Cycle(String, String),
    #[error("map is not monotone: {0:?} ≤ {1:?} but their images are not ordered")]
    NotMonotone(String, String),
    #[error("assignment is missing {0:?}")]
    Unassigned(String),
    #[error("level {level} of {label:?} lies outside 1..={n}")]
    LevelOutOfRange { label: String, level: usize, n: usize },
    #[error("layering has {layers} layers but the map starts at {source_len}")]
    ArityMismatch { layers: usize, source_len: usize },
    #[error("cannot pull back along non-convex map {0}")]
    NotConvex(String),
    #[error("carrier of size {size} exceeds the certified cap {cap}")]
    SizeCap { size: usize, cap: usize },
    #[error("invalid JSON: {0}")]
    Json(String),
}

/// A partial order on `0..n`, stored as a 0/1 matrix.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Order {
    n: usize,
    leq: Vec<u8>,
}

impl Order {
    pub fn discrete(n: usize) -> Self {
        let mut leq = vec![0; n * n];
        for i in 0..n {
            leq[i * n + i] = 1;
        }
        Self { n, leq }
    }

    /// The chain `0 < 1 < … < n-1`.
    pub fn chain(n: usize) -> Self {
        let mut leq = vec![0; n * n];
        for i in 0..n {
            for j in i..n {
                leq[i * n + j] = 1;
            }
        }
        Self { n, leq }
    }

    /// Reflexive-transitive closure of `pairs`; on a cycle, returns a pair of
    /// distinct elements that are mutually related.
    pub fn from_pairs(n: usize, pairs: &[(usize, usize)]) -> Result<Self, (usize, usize)> {
        let mut leq = Self::discrete(n).leq;
        for &(a, b) in pairs {
            leq[a * n + b] = 1;
        }
        for k in 0..n {
            for i in 0..n {
                if leq[i * n + k] == 1 {
                    for j in 0..n {
                        if leq[k * n + j] == 1 {
                            leq[i * n + j] = 1;
                        }
                    }
                }
            }
        }
        for i in 0..n {
            for j in i + 1..n {
                if leq[i * n + j] == 1 && leq[j * n + i] == 1 {
                    return Err((i, j));
                }
            }
        }
        Ok(Self { n, leq })
    }

    /// Accepts a matrix that is already a partial order.
    pub fn from_matrix(n: usize, leq: Vec<u8>) -> Option<Self> {
        let o = Self { n, leq };
        o.is_partial_order().then_some(o)
    }

    fn is_partial_order(&self) -> bool {
        let n = self.n;
        if self.leq.len() != n * n || self.leq.iter().any(|&x| x > 1) {
            return false;
        }
        (0..n).all(|i| self.leq(i, i))
            && (0..n).all(|i| (0..n).all(|j| i == j || !(self.leq(i, j) && self.leq(j, i))))
            && (0..n).all(|i| (0..n).all(|j| !self.leq(i, j) || (0..n).all(|k| !self.leq(j, k) || self.leq(i, k))))
    }

    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        self.n == 0
    }

    #[inline]
    pub fn leq(&self, i: usize, j: usize) -> bool {
        self.leq[i * self.n + j] == 1
    }

    #[inline]
    pub fn lt(&self, i: usize, j: usize) -> bool {
        i != j && self.leq(i, j)
    }

    pub fn matrix(&self) -> &[u8] {
        &self.leq
    }

    pub fn is_discrete(&self) -> bool {
        (0..self.n).all(|i| (0..self.n).all(|j| i == j || !self.leq(i, j)))
    }

    pub fn is_total(&self) -> bool {
        (0..self.n).all(|i| (0..self.n).all(|j| self.leq(i, j) || self.leq(j, i)))
    }

    /// Covering pairs `(a, b)` with `a ⋖ b`.
    pub fn covers(&self) -> Vec<(usize, usize)> {
        let n = self.n;
        let mut out = Vec::new();
        for a in 0..n {
            for b in 0..n {
                if self.lt(a, b) && !(0..n).any(|c| self.lt(a, c) && self.lt(c, b)) {
                    out.push((a, b));
                }
            }
        }
        out
    }

    fn mask(&self, subset: &[usize]) -> Vec<bool> {
        let mut m = vec![false; self.n];
        for &i in subset {
            m[i] = true;
        }
        m
    }

    pub fn is_convex(&self, subset: &[usize]) -> bool {
        let m = self.mask(subset);
        (0..self.n).all(|x| m[x] || !subset.iter().any(|&a| self.leq(a, x) && subset.iter().any(|&b| self.leq(x, b))))
    }

    pub fn is_lower(&self, subset: &[usize]) -> bool {
        let m = self.mask(subset);
        subset.iter().all(|&b| (0..self.n).all(|x| !self.leq(x, b) || m[x]))
    }

    pub fn is_upper(&self, subset: &[usize]) -> bool {
        let m = self.mask(subset);
        subset.iter().all(|&a| (0..self.n).all(|x| !self.leq(a, x) || m[x]))
    }

    /// Induced order on the sorted index list `keep`, relabelled
    /// order-preservingly to `0..keep.len()`.
    pub fn restrict(&self, keep: &[usize]) -> Order {
        let k = keep.len();
        let mut leq = vec![0; k * k];
        for (r, &i) in keep.iter().enumerate() {
            for (c, &j) in keep.iter().enumerate() {
                leq[r * k + c] = self.leq[i * self.n + j];
            }
        }
        Order { n: k, leq }
    }

    /// The order transported along the bijection `i ↦ perm[i]`.
    pub fn transport(&self, perm: &[usize]) -> Order {
        Order { n: self.n, leq: permute_matrix(&self.leq, self.n, perm) }
    }

    pub fn disjoint_union(&self, other: &Order) -> Order {
        Order { n: self.n + other.n, leq: block_sum(&self.leq, self.n, &other.leq, other.n) }
    }

    /// Lower sets as sorted index lists.
    pub fn lower_sets(&self) -> Vec<Vec<usize>> {
        self.layerings(2).into_iter().map(|lv| (0..self.n).filter(|&i| lv[i] == 1).collect()).collect()
    }

    /// Some linear extension.
    pub fn linear_extension(&self) -> Vec<usize> {
        let mut idx: Vec<usize> = (0..self.n).collect();
        idx.sort_by_key(|&i| (0..self.n).filter(|&j| self.lt(j, i)).count());
        idx
    }

    /// All monotone maps to `1..=k`, as level vectors.
    pub fn layerings(&self, k: usize) -> Vec<Vec<u8>> {
        let ext = self.linear_extension();
        let mut out = Vec::new();
        let mut level = vec![0u8; self.n];
        self.layer_rec(&ext, 0, k as u8, &mut level, &mut out);
        out
    }

    fn layer_rec(&self, ext: &[usize], t: usize, k: u8, level: &mut Vec<u8>, out: &mut Vec<Vec<u8>>) {
        if t == ext.len() {
            out.push(level.clone());
            return;
        }
        let x = ext[t];
        let lo = ext[..t].iter().filter(|&&y| self.leq(y, x)).map(|&y| level[y]).max().unwrap_or(1);
        for l in lo..=k {
            level[x] = l;
            self.layer_rec(ext, t + 1, k, level, out);
        }
        level[x] = 0;
    }

    /// Every monotone level vector must come through here.
    pub fn is_monotone_levels(&self, level: &[u8]) -> bool {
        (0..self.n).all(|i| (0..self.n).all(|j| !self.leq(i, j) || level[i] <= level[j]))
    }

    pub fn relational(&self) -> Relational {
        Relational::new(self.n, vec![0; self.n], vec![self.leq.clone()])
    }

    /// All partial orders on `0..n` (labelled).
    pub fn all_labeled(n: usize) -> Vec<Order> {
        let mut seen = std::collections::HashSet::new();
        let mut out = Vec::new();
        let perms = permutations(n);
        for o in Self::all_unlabeled(n) {
            for p in &perms {
                let t = o.transport(p);
                if seen.insert(t.clone()) {
                    out.push(t);
                }
            }
        }
        out.sort();
        out
    }

    /// One representative per isomorphism class of posets on `n` elements.
    pub fn all_unlabeled(n: usize) -> Vec<Order> {
        let mut level = vec![Order::discrete(0)];
        for _ in 0..n {
            let mut next: BTreeMap<Vec<u8>, Order> = BTreeMap::new();
            for o in &level {
                for down in o.lower_sets() {
                    let grown = o.add_maximal(&down);
                    next.entry(grown.relational().canonical_form()).or_insert(grown);
                }
            }
            level = next.into_values().collect();
        }
        level
    }

    /// Adjoin a new element `n` strictly above exactly the lower set `down`.
    fn add_maximal(&self, down: &[usize]) -> Order {
        let m = self.n + 1;
        let mut leq = vec![0; m * m];
        for i in 0..self.n {
            for j in 0..self.n {
                leq[i * m + j] = self.leq[i * self.n + j];
            }
        }
        for &d in down {
            leq[d * m + self.n] = 1;
        }
        leq[self.n * m + self.n] = 1;
        Order { n: m, leq }
    }
}

/// `out[p[i]][p[j]] = m[i][j]`.
pub fn permute_matrix(m: &[u8], n: usize, p: &[usize]) -> Vec<u8> {
    let mut out = vec![0; n * n];
    for i in 0..n {
        for j in 0..n {
            out[p[i] * n + p[j]] = m[i * n + j];
        }
    }
    out
}

/// Block-diagonal sum of two square matrices.
pub fn block_sum(a: &[u8], na: usize, b: &[u8], nb: usize) -> Vec<u8> {
    let n = na + nb;
    let mut out = vec![0; n * n];
    for i in 0..na {
        out[i * n..i * n + na].copy_from_slice(&a[i * na..(i + 1) * na]);
    }
    for i in 0..nb {
        out[(na + i) * n + na..(na + i) * n + n].copy_from_slice(&b[i * nb..(i + 1) * nb]);
    }
    out
}

/// Submatrix on the sorted index list `keep`.
pub fn restrict_matrix(m: &[u8], n: usize, keep: &[usize]) -> Vec<u8> {
    let k = keep.len();
    let mut out = vec![0; k * k];
    for (r, &i) in keep.iter().enumerate() {
        for (c, &j) in keep.iter().enumerate() {
            out[r * k + c] = m[i * n + j];
        }
    }
    out
}

/// All permutations of `0..n` in lexicographic order.
pub fn permutations(n: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur: Vec<usize> = (0..n).collect();
    loop {
        out.push(cur.clone());
        let Some(i) = (1..n).rev().find(|&i| cur[i - 1] < cur[i]) else {
            return out;
        };
        let j = (i..n).rev().find(|&j| cur[j] > cur[i - 1]).expect("successor exists");
        cur.swap(i - 1, j);
        cur[i..].reverse();
    }
}

/// A finite poset with string labels.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct FinPoset {
    labels: Vec<String>,
    order: Order,
}

impl FinPoset {
    /// Build from labels and generating pairs `(a, b)` meaning `a ≤ b`.
    pub fn new<S: AsRef<str>>(elements: &[S], pairs: &[(S, S)]) -> Result<Self, PosetError> {
        let labels: Vec<String> = elements.iter().map(|s| s.as_ref().to_string()).collect();
        for (i, l) in labels.iter().enumerate() {
            if labels[..i].contains(l) {
                return Err(PosetError::DuplicateLabel(l.clone()));
            }
        }
        let find = |s: &str| labels.iter().position(|l| l == s).ok_or_else(|| PosetError::UnknownLabel(s.into()));
        let idx: Vec<(usize, usize)> =
            pairs.iter().map(|(a, b)| Ok((find(a.as_ref())?, find(b.as_ref())?))).collect::<Result<_, PosetError>>()?;
        let order = Order::from_pairs(labels.len(), &idx)
            .map_err(|(i, j)| PosetError::Cycle(labels[i].clone(), labels[j].clone()))?;
        Ok(Self { labels, order })
    }

    pub fn from_order(labels: Vec<String>, order: Order) -> Self {
        assert_eq!(labels.len(), order.len());
        Self { labels, order }
    }

    /// Labels `"0".."n-1"`.
    pub fn numbered(order: Order) -> Self {
        let labels = (0..order.len()).map(|i| i.to_string()).collect();
        Self { labels, order }
    }

    pub fn discrete<S: AsRef<str>>(elements: &[S]) -> Result<Self, PosetError> {
        Self::new(elements, &[])
    }

    pub fn chain<S: AsRef<str>>(elements: &[S]) -> Result<Self, PosetError> {
        let pairs: Vec<(&str, &str)> = elements.windows(2).map(|w| (w[0].as_ref(), w[1].as_ref())).collect();
        let elems: Vec<&str> = elements.iter().map(AsRef::as_ref).collect();
        Self::new(&elems, &pairs)
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn order(&self) -> &Order {
        &self.order
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    pub fn index_of(&self, label: &str) -> Result<usize, PosetError> {
        self.labels.iter().position(|l| l == label).ok_or_else(|| PosetError::UnknownLabel(label.into()))
    }

    /// Sorted indices of a label set.
    pub fn indices<S: AsRef<str>>(&self, subset: &[S]) -> Result<Vec<usize>, PosetError> {
        let mut idx: Vec<usize> = subset.iter().map(|s| self.index_of(s.as_ref())).collect::<Result<_, _>>()?;
        idx.sort_unstable();
        idx.dedup();
        Ok(idx)
    }

    pub fn leq(&self, a: &str, b: &str) -> Result<bool, PosetError> {
        Ok(self.order.leq(self.index_of(a)?, self.index_of(b)?))
    }

    pub fn is_convex_subset<S: AsRef<str>>(&self, subset: &[S]) -> Result<bool, PosetError> {
        Ok(self.order.is_convex(&self.indices(subset)?))
    }

    pub fn is_lower_set<S: AsRef<str>>(&self, subset: &[S]) -> Result<bool, PosetError> {
        Ok(self.order.is_lower(&self.indices(subset)?))
    }

    pub fn is_upper_set<S: AsRef<str>>(&self, subset: &[S]) -> Result<bool, PosetError> {
        Ok(self.order.is_upper(&self.indices(subset)?))
    }

    /// Full induced subposet; element order follows the original.
    pub fn restrict<S: AsRef<str>>(&self, subset: &[S]) -> Result<FinPoset, PosetError> {
        Ok(self.restrict_indices(&self.indices(subset)?))
    }

    pub fn restrict_indices(&self, keep: &[usize]) -> FinPoset {
        FinPoset { labels: keep.iter().map(|&i| self.labels[i].clone()).collect(), order: self.order.restrict(keep) }
    }

    /// Coproduct; labels are prefixed with `L.` and `R.`.
    pub fn disjoint_union(&self, other: &FinPoset) -> FinPoset {
        let labels =
            self.labels.iter().map(|l| format!("L.{l}")).chain(other.labels.iter().map(|l| format!("R.{l}"))).collect();
        FinPoset { labels, order: self.order.disjoint_union(&other.order) }
    }

    pub fn enumerate_layerings(&self, n: usize) -> Vec<Layering> {
        self.order
            .layerings(n)
            .into_iter()
            .map(|lv| Layering { carrier: self.clone(), n, level: lv.into_iter().map(usize::from).collect() })
            .collect()
    }

    fn check_cap(&self) -> Result<(), PosetError> {
        let cap = size_cap();
        if self.len() > cap {
            return Err(PosetError::SizeCap { size: self.len(), cap });
        }
        Ok(())
    }

    pub fn canonical_key(&self) -> Result<CanonicalKey, PosetError> {
        self.check_cap()?;
        Ok(CanonicalKey::new("poset", &self.order.relational().canonical_form()))
    }

    /// All order isomorphisms `self → other` as label maps.
    pub fn isomorphisms(&self, other: &FinPoset) -> Result<Vec<BTreeMap<String, String>>, PosetError> {
        self.check_cap()?;
        Ok(self
            .order
            .relational()
            .isomorphisms(&other.order.relational())
            .into_iter()
            .map(|m| m.iter().enumerate().map(|(i, &j)| (self.labels[i].clone(), other.labels[j].clone())).collect())
            .collect())
    }

    pub fn automorphism_count(&self) -> Result<u64, PosetError> {
        self.check_cap()?;
        Ok(self.order.relational().automorphism_count())
    }
}

/// A monotone map between finite posets.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PosetMap {
    domain: FinPoset,
    codomain: FinPoset,
    assignment: Vec<usize>,
}

impl PosetMap {
    pub fn new(
        domain: FinPoset,
        codomain: FinPoset,
        assignment: &BTreeMap<String, String>,
    ) -> Result<Self, PosetError> {
        let assignment: Vec<usize> = domain
            .labels
            .iter()
            .map(|l| {
                let target = assignment.get(l).ok_or_else(|| PosetError::Unassigned(l.clone()))?;
                codomain.index_of(target)
            })
            .collect::<Result<_, _>>()?;
        for i in 0..domain.len() {
            for j in 0..domain.len() {
                if domain.order.leq(i, j) && !codomain.order.leq(assignment[i], assignment[j]) {
                    return Err(PosetError::NotMonotone(domain.labels[i].clone(), domain.labels[j].clone()));
                }
            }
        }
        Ok(Self { domain, codomain, assignment })
    }

    pub fn domain(&self) -> &FinPoset {
        &self.domain
    }

    pub fn codomain(&self) -> &FinPoset {
        &self.codomain
    }

    pub fn apply(&self, label: &str) -> Result<&str, PosetError> {
        Ok(&self.codomain.labels[self.assignment[self.domain.index_of(label)?]])
    }

    /// Injective, order-reflecting, with convex image.
    pub fn is_convex(&self) -> bool {
        let a = &self.assignment;
        let n = a.len();
        let injective = (0..n).all(|i| (0..i).all(|j| a[i] != a[j]));
        let reflecting =
            (0..n).all(|i| (0..n).all(|j| self.domain.order.leq(i, j) == self.codomain.order.leq(a[i], a[j])));
        let mut image = a.clone();
        image.sort_unstable();
        injective && reflecting && self.codomain.order.is_convex(&image)
    }
}

/// A monotone map from a poset to the chain `1..=n`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Layering {
    carrier: FinPoset,
    n: usize,
    level: Vec<usize>,
}

impl Layering {
    pub fn new(carrier: FinPoset, n: usize, level: &BTreeMap<String, usize>) -> Result<Self, PosetError> {
        let lv: Vec<usize> = carrier
            .labels
            .iter()
            .map(|l| level.get(l).copied().ok_or_else(|| PosetError::Unassigned(l.clone())))
            .collect::<Result<_, _>>()?;
        Self::from_levels(carrier, n, lv)
    }

    pub fn from_levels(carrier: FinPoset, n: usize, level: Vec<usize>) -> Result<Self, PosetError> {
        for (i, &l) in level.iter().enumerate() {
            if l == 0 || l > n {
                return Err(PosetError::LevelOutOfRange { label: carrier.labels[i].clone(), level: l, n });
            }
        }
        let o = &carrier.order;
        for i in 0..o.len() {
            for j in 0..o.len() {
                if o.leq(i, j) && level[i] > level[j] {
                    return Err(PosetError::NotMonotone(carrier.labels[i].clone(), carrier.labels[j].clone()));
                }
            }
        }
        Ok(Self { carrier, n, level })
    }

    pub fn carrier(&self) -> &FinPoset {
        &self.carrier
    }

    pub fn layer_count(&self) -> usize {
        self.n
    }

    pub fn level_of(&self, label: &str) -> Result<usize, PosetError> {
        Ok(self.level[self.carrier.index_of(label)?])
    }

    pub fn levels(&self) -> &[usize] {
        &self.level
    }

    /// Layer `i` (1-based) as sorted indices.
    pub fn layer_indices(&self, i: usize) -> Vec<usize> {
        (0..self.level.len()).filter(|&x| self.level[x] == i).collect()
    }

    /// Layers `1..=n` as label lists.
    pub fn layers(&self) -> Vec<Vec<String>> {
        (1..=self.n)
            .map(|i| self.layer_indices(i).into_iter().map(|x| self.carrier.labels[x].clone()).collect())
            .collect()
    }

    /// Postcompose with `g : n̲ → m̲`.
    pub fn push(&self, g: &UlDeltaMap) -> Result<Layering, PosetError> {
        if g.source() != self.n {
            return Err(PosetError::ArityMismatch { layers: self.n, source_len: g.source() });
        }
        Ok(Layering {
            carrier: self.carrier.clone(),
            n: g.target(),
            level: self.level.iter().map(|&l| g.apply(l)).collect(),
        })
    }

    /// Restrict to the layers hit by the convex map `i : k̲ ↣ n̲`.
    pub fn pull(&self, i: &UlDeltaMap) -> Result<Layering, PosetError> {
        if i.target() != self.n {
            return Err(PosetError::ArityMismatch { layers: self.n, source_len: i.target() });
        }
        if !i.is_convex() {
            return Err(PosetError::NotConvex(i.to_string()));
        }
        let a = i.offset().unwrap_or(0);
        let k = i.source();
        let keep: Vec<usize> = (0..self.level.len()).filter(|&x| self.level[x] > a && self.level[x] <= a + k).collect();
        Ok(Layering {
            carrier: self.carrier.restrict_indices(&keep),
            n: k,
            level: keep.iter().map(|&x| self.level[x] - a).collect(),
        })
    }
}
