//! Built-in species.

use super::{Decoration, JsonFormat, Shape, Species, SpeciesDef, SpeciesKind};
use crate::poset::Order;

/// Finite sets: one structure on every discrete carrier.
#[derive(Clone, Copy, Debug, Default)]
pub struct Sets;

impl SpeciesDef for Sets {
    fn tag(&self) -> &str {
        "set"
    }

    fn kind(&self) -> SpeciesKind {
        SpeciesKind::Ordinary
    }

    fn supports(&self, order: &Order) -> bool {
        order.is_discrete()
    }

    fn is_valid(&self, _: &Order, deco: &Decoration) -> bool {
        deco.matrices().is_empty()
    }

    fn decorations(&self, _: &Order, _: usize) -> Vec<Decoration> {
        vec![Decoration::unit()]
    }

    fn json_format(&self) -> JsonFormat {
        JsonFormat::Set
    }
}

/// Graphs with multiple edges and loops, stored as a symmetric multiplicity
/// matrix. The decoration bound caps the total number of edges.
#[derive(Clone, Copy, Debug, Default)]
pub struct Graphs;

impl Graphs {
    fn fill(slots: &[(usize, usize)], n: usize, left: usize, m: &mut Vec<u8>, out: &mut Vec<Decoration>) {
        let Some((&(i, j), rest)) = slots.split_first() else {
            out.push(Decoration::new(vec![m.clone()]));
            return;
        };
        for c in 0..=left {
            m[i * n + j] = c as u8;
            m[j * n + i] = c as u8;
            Self::fill(rest, n, left - c, m, out);
        }
        m[i * n + j] = 0;
        m[j * n + i] = 0;
    }
}

impl SpeciesDef for Graphs {
    fn tag(&self) -> &str {
        "graph"
    }

    fn kind(&self) -> SpeciesKind {
        SpeciesKind::Ordinary
    }

    fn supports(&self, order: &Order) -> bool {
        order.is_discrete()
    }

    fn is_valid(&self, order: &Order, deco: &Decoration) -> bool {
        let n = order.len();
        match deco.matrices() {
            [m] => m.len() == n * n && (0..n).all(|i| (0..n).all(|j| m[i * n + j] == m[j * n + i])),
            _ => false,
        }
    }

    fn decorations(&self, order: &Order, bound: usize) -> Vec<Decoration> {
        let n = order.len();
        let slots: Vec<(usize, usize)> = (0..n).flat_map(|i| (i..n).map(move |j| (i, j))).collect();
        let mut out = Vec::new();
        Self::fill(&slots, n, bound.min(u8::MAX as usize), &mut vec![0; n * n], &mut out);
        out
    }

    fn json_format(&self) -> JsonFormat {
        JsonFormat::Graph
    }
}

/// The terminal directed restriction species.
#[derive(Clone, Copy, Debug, Default)]
pub struct Posets;

impl SpeciesDef for Posets {
    fn tag(&self) -> &str {
        "poset"
    }

    fn kind(&self) -> SpeciesKind {
        SpeciesKind::Directed
    }

    fn supports(&self, _: &Order) -> bool {
        true
    }

    fn is_valid(&self, _: &Order, deco: &Decoration) -> bool {
        deco.matrices().is_empty()
    }

    fn decorations(&self, _: &Order, _: usize) -> Vec<Decoration> {
        vec![Decoration::unit()]
    }

    fn json_format(&self) -> JsonFormat {
        JsonFormat::Poset
    }
}

/// Forests as posets: every principal up-set is a chain, roots maximal.
#[derive(Clone, Copy, Debug, Default)]
pub struct Forests;

pub(crate) fn is_forest(order: &Order) -> bool {
    let n = order.len();
    (0..n).all(|x| {
        let up: Vec<usize> = (0..n).filter(|&y| order.leq(x, y)).collect();
        up.iter().all(|&a| up.iter().all(|&b| order.leq(a, b) || order.leq(b, a)))
    })
}

impl SpeciesDef for Forests {
    fn tag(&self) -> &str {
        "forest"
    }

    fn kind(&self) -> SpeciesKind {
        SpeciesKind::Directed
    }

    fn supports(&self, order: &Order) -> bool {
        is_forest(order)
    }

    fn is_valid(&self, _: &Order, deco: &Decoration) -> bool {
        deco.matrices().is_empty()
    }

    fn decorations(&self, _: &Order, _: usize) -> Vec<Decoration> {
        vec![Decoration::unit()]
    }

    fn json_format(&self) -> JsonFormat {
        JsonFormat::Forest
    }
}

/// Totally ordered carriers. Not closed under disjoint union.
#[derive(Clone, Copy, Debug, Default)]
pub struct LinearOrders;

impl SpeciesDef for LinearOrders {
    fn tag(&self) -> &str {
        "linear_order"
    }

    fn kind(&self) -> SpeciesKind {
        SpeciesKind::Directed
    }

    fn supports(&self, order: &Order) -> bool {
        order.is_total()
    }

    fn is_valid(&self, _: &Order, deco: &Decoration) -> bool {
        deco.matrices().is_empty()
    }

    fn decorations(&self, _: &Order, _: usize) -> Vec<Decoration> {
        vec![Decoration::unit()]
    }

    fn json_format(&self) -> JsonFormat {
        JsonFormat::Poset
    }

    fn is_monoidal(&self) -> bool {
        false
    }
}

/// A second, unconstrained partial order on the carrier.
#[derive(Clone, Copy, Debug, Default)]
pub struct DoublePosets;

impl SpeciesDef for DoublePosets {
    fn tag(&self) -> &str {
        "double_poset"
    }

    fn kind(&self) -> SpeciesKind {
        SpeciesKind::Directed
    }

    fn supports(&self, _: &Order) -> bool {
        true
    }

    fn is_valid(&self, order: &Order, deco: &Decoration) -> bool {
        match deco.matrices() {
            [m] => Order::from_matrix(order.len(), m.clone()).is_some(),
            _ => false,
        }
    }

    fn decorations(&self, order: &Order, _: usize) -> Vec<Decoration> {
        Order::all_labeled(order.len()).into_iter().map(|o| Decoration::new(vec![o.matrix().to_vec()])).collect()
    }

    fn json_format(&self) -> JsonFormat {
        JsonFormat::DoublePoset
    }
}

/// Simple directed acyclic graphs whose reachability order is the carrier:
/// edge sets containing every cover and contained in the strict order.
#[derive(Clone, Copy, Debug, Default)]
pub struct AcyclicDigraphs;

impl SpeciesDef for AcyclicDigraphs {
    fn tag(&self) -> &str {
        "dag"
    }

    fn kind(&self) -> SpeciesKind {
        SpeciesKind::Directed
    }

    fn supports(&self, _: &Order) -> bool {
        true
    }

    fn is_valid(&self, order: &Order, deco: &Decoration) -> bool {
        let n = order.len();
        let [e] = deco.matrices() else { return false };
        e.len() == n * n
            && (0..n).all(|i| (0..n).all(|j| e[i * n + j] <= 1 && (e[i * n + j] == 0 || order.lt(i, j))))
            && order.covers().iter().all(|&(a, b)| e[a * n + b] == 1)
    }

    fn decorations(&self, order: &Order, _: usize) -> Vec<Decoration> {
        let n = order.len();
        let covers = order.covers();
        let optional: Vec<(usize, usize)> = (0..n)
            .flat_map(|i| (0..n).map(move |j| (i, j)))
            .filter(|&(i, j)| order.lt(i, j) && !covers.contains(&(i, j)))
            .collect();
        let mut base = vec![0u8; n * n];
        for &(a, b) in &covers {
            base[a * n + b] = 1;
        }
        (0u64..1 << optional.len())
            .map(|mask| {
                let mut e = base.clone();
                for (t, &(a, b)) in optional.iter().enumerate() {
                    if mask >> t & 1 == 1 {
                        e[a * n + b] = 1;
                    }
                }
                Decoration::new(vec![e])
            })
            .collect()
    }

    fn json_format(&self) -> JsonFormat {
        JsonFormat::Dag
    }
}

/// An ordinary species viewed as a directed one supported on discrete posets.
#[derive(Clone, Debug)]
pub struct Embedded {
    inner: Species,
    tag: String,
}

impl Embedded {
    pub(crate) fn new(inner: Species) -> Self {
        let tag = format!("directed_{}", inner.tag());
        Self { inner, tag }
    }
}

impl SpeciesDef for Embedded {
    fn tag(&self) -> &str {
        &self.tag
    }

    fn kind(&self) -> SpeciesKind {
        SpeciesKind::Directed
    }

    fn supports(&self, order: &Order) -> bool {
        order.is_discrete() && self.inner.def().supports(order)
    }

    fn is_valid(&self, order: &Order, deco: &Decoration) -> bool {
        self.inner.def().is_valid(order, deco)
    }

    fn decorations(&self, order: &Order, bound: usize) -> Vec<Decoration> {
        if !self.supports(order) {
            return Vec::new();
        }
        self.inner.def().decorations(order, bound)
    }

    fn json_format(&self) -> JsonFormat {
        self.inner.json_format()
    }

    fn is_monoidal(&self) -> bool {
        self.inner.is_monoidal()
    }

    fn restrict(&self, shape: &Shape, keep: &[usize]) -> Shape {
        self.inner.def().restrict(shape, keep)
    }

    fn transport(&self, shape: &Shape, perm: &[usize]) -> Shape {
        self.inner.def().transport(shape, perm)
    }

    fn combine(&self, a: &Shape, b: &Shape) -> Shape {
        self.inner.def().combine(a, b)
    }
}
