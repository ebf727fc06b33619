use std::collections::HashSet;

use super::{AxiomReport, CheckResult, DecompError, LevelwiseMap, TruncatedSimplicialGroupoid};
use crate::groupoid::{
    fibre, is_homotopy_pullback, is_homotopy_pullback_where, is_mono_up_to_equiv, GroupoidFunctor, GroupoidSquare,
};
use crate::simplex::{enumerate_iesq, DeltaMap, IesqBounds};
use crate::Exec;

#[derive(Clone, Copy, Debug)]
enum Step {
    Face(usize),
    Degeneracy(usize),
}

fn path(t: &TruncatedSimplicialGroupoid, start: usize, steps: &[Step]) -> Result<GroupoidFunctor, DecompError> {
    let mut acc = GroupoidFunctor::identity(t.level(start).clone());
    let mut cur = start;
    for step in steps {
        let next = match *step {
            Step::Face(i) => {
                cur -= 1;
                t.face(cur + 1, i)
            }
            Step::Degeneracy(i) => {
                cur += 1;
                t.degeneracy(cur - 1, i)
            }
        };
        acc = next.compose(&acc)?;
    }
    Ok(acc)
}

fn word(steps: &[Step]) -> String {
    if steps.is_empty() {
        return "id".into();
    }
    steps
        .iter()
        .rev()
        .map(|s| match s {
            Step::Face(i) => format!("d{i}"),
            Step::Degeneracy(i) => format!("s{i}"),
        })
        .collect()
}

struct Identity {
    start: usize,
    lhs: Vec<Step>,
    rhs: Vec<Step>,
}

impl Identity {
    fn name(&self) -> String {
        format!("{}={}@X{}", word(&self.lhs), word(&self.rhs), self.start)
    }
}

fn identities(top: usize) -> Vec<Identity> {
    use Step::{Degeneracy as S, Face as D};
    let mut out = Vec::new();
    for n in 2..=top {
        for j in 1..=n {
            for i in 0..j {
                out.push(Identity { start: n, lhs: vec![D(j), D(i)], rhs: vec![D(i), D(j - 1)] });
            }
        }
    }
    for n in 0..top.saturating_sub(1) {
        for j in 0..=n {
            for i in 0..=j {
                out.push(Identity { start: n, lhs: vec![S(j), S(i)], rhs: vec![S(i), S(j + 1)] });
            }
        }
    }
    for n in 0..top {
        for j in 0..=n {
            for i in 0..=n + 1 {
                let rhs = if i < j {
                    vec![D(i), S(j - 1)]
                } else if i == j || i == j + 1 {
                    Vec::new()
                } else {
                    vec![D(i - 1), S(j)]
                };
                out.push(Identity { start: n, lhs: vec![S(j), D(i)], rhs });
            }
        }
    }
    out
}

/// Every simplicial identity among the stored faces and degeneracies, on
/// the nose.
pub fn check_simplicial_identities(t: &TruncatedSimplicialGroupoid, exec: Exec) -> Result<AxiomReport, DecompError> {
    let items = identities(t.top());
    let results = exec.map(&items, |id| -> Result<CheckResult, DecompError> {
        let lhs = path(t, id.start, &id.lhs)?;
        let rhs = path(t, id.start, &id.rhs)?;
        Ok(match lhs.first_difference(&rhs) {
            None => CheckResult::pass(id.name()),
            Some(at) => CheckResult::fail(id.name(), at),
        })
    });
    Ok(AxiomReport::new("simplicial", results.into_iter().collect::<Result<_, _>>()?))
}

fn square_verdict(
    name: String,
    sq: Result<GroupoidSquare, crate::groupoid::GroupoidError>,
) -> Result<CheckResult, DecompError> {
    let sq = sq?;
    Ok(CheckResult::from_outcome(name, is_homotopy_pullback(&sq)))
}

/// Homotopy pullback test for the image of every identity-extension square
/// with corners in the truncation. Squares reaching one level further are
/// listed as skipped.
pub fn check_decomposition(t: &TruncatedSimplicialGroupoid, exec: Exec) -> Result<AxiomReport, DecompError> {
    let top = t.top();
    let squares: Vec<_> =
        enumerate_iesq(IesqBounds::uniform(top + 1)).into_iter().filter(|sq| sq.top_level() <= top + 1).collect();
    let results = exec.map(&squares, |sq| -> Result<CheckResult, DecompError> {
        let name = format!("{sq}@X{}", sq.top_level());
        if sq.top_level() > top {
            return Ok(CheckResult::skipped(name, "beyond truncation"));
        }
        let d = sq.delta_square();
        let built = GroupoidSquare::new(
            t.operator(&d.left)?,
            t.operator(&d.top)?,
            t.operator(&d.bottom)?,
            t.operator(&d.right)?,
        );
        square_verdict(name, built)
    });
    Ok(AxiomReport::new("decomposition", results.into_iter().collect::<Result<_, _>>()?))
}

/// The squares `d_0 d_{n+1} = d_n d_0` out of `X_{n+1}` for `1 ≤ n < N`.
///
/// With `max_degree`, pairs whose glued degree `deg a + deg b - deg d_0 a`
/// exceeds it are not required to be hit: a carrier-size truncation cannot
/// contain them.
pub fn check_segal(
    t: &TruncatedSimplicialGroupoid,
    max_degree: Option<usize>,
    exec: Exec,
) -> Result<AxiomReport, DecompError> {
    let levels: Vec<usize> = (1..t.top()).collect();
    let results = exec.map(&levels, |&n| -> Result<CheckResult, DecompError> {
        let name = format!("d{}-d0-over-X{}@X{}", n + 1, n - 1, n + 1);
        let sq = GroupoidSquare::new(
            t.face(n + 1, n + 1).clone(),
            t.face(n + 1, 0).clone(),
            t.face(n, 0).clone(),
            t.face(n, n).clone(),
        )?;
        let (a, b, f) = (sq.f.domain().clone(), sq.g.domain().clone(), sq.f.clone());
        let relevant = |x: usize, y: usize| {
            max_degree.is_none_or(|m| a.degree(x) + b.degree(y) - f.codomain().degree(f.on_object(x)) <= m)
        };
        Ok(CheckResult::from_outcome(name, is_homotopy_pullback_where(&sq, relevant)))
    });
    Ok(AxiomReport::new("segal", results.into_iter().collect::<Result<_, _>>()?))
}

/// Non-identity generic maps `[m] → [n]` with `m, n ≤ top`.
pub fn generic_maps(top: usize) -> Vec<DeltaMap> {
    let mut out = Vec::new();
    for n in 0..=top {
        for m in 0..=top {
            out.extend(DeltaMap::all(m, n).into_iter().filter(|a| a.is_generic() && !a.is_identity()));
        }
    }
    out
}

/// Cartesian-ness of a simplicial map on every generic map. Fails with
/// [`DecompError::NotSimplicial`] when the map does not commute with the
/// structure maps.
pub fn check_culf(
    map: &LevelwiseMap,
    domain: &TruncatedSimplicialGroupoid,
    codomain: &TruncatedSimplicialGroupoid,
    exec: Exec,
) -> Result<AxiomReport, DecompError> {
    map.check_simplicial(domain, codomain)?;
    let maps = generic_maps(map.top());
    let results = exec.map(&maps, |a| -> Result<CheckResult, DecompError> {
        let (m, n) = (a.source(), a.target());
        let built = GroupoidSquare::new(
            domain.operator(a)?,
            map.components[n].clone(),
            map.components[m].clone(),
            codomain.operator(a)?,
        );
        square_verdict(format!("generic {a}"), built)
    });
    Ok(AxiomReport::new("culf", results.into_iter().collect::<Result<_, _>>()?))
}

/// Completeness, local finiteness, local discreteness and finite length.
///
/// Fibres are finite by construction, so local finiteness reduces to their
/// existence. An element of `X_1` has length below `n` when everything over
/// it in `X_n` along the long edge is degenerate; if no `n ≤ N` works the
/// element is skipped.
pub fn check_finiteness(t: &TruncatedSimplicialGroupoid, exec: Exec) -> Result<AxiomReport, DecompError> {
    let top = t.top();
    let mut results = Vec::new();
    if top == 0 {
        results.push(CheckResult::skipped("complete", "needs level 1"));
        return Ok(AxiomReport::new("finiteness", results));
    }
    let s0 = t.degeneracy(0, 0);
    results.push(CheckResult::from_outcome("complete", is_mono_up_to_equiv(s0)));

    let x1 = t.level(1);
    let reps: Vec<usize> = (0..x1.class_count()).map(|c| x1.class_rep(c)).collect();
    let fibre_results = exec.map(&reps, |&x| -> Result<Vec<CheckResult>, DecompError> {
        let label = x1.label(x);
        let mut out = Vec::new();
        let over_s0 = fibre(s0, x)?;
        out.push(verdict_discrete(format!("s0-fibre@{label}"), over_s0.groupoid.is_discrete()));
        if top >= 2 {
            let over_d1 = fibre(t.face(2, 1), x)?;
            out.push(verdict_discrete(format!("d1-fibre@{label}"), over_d1.groupoid.is_discrete()));
        } else {
            out.push(CheckResult::skipped(format!("d1-fibre@{label}"), "needs level 2"));
        }
        Ok(out)
    });
    for r in fibre_results {
        results.extend(r?);
    }

    // Classes of X_1 with a non-degenerate element over them in X_n.
    let mut live_by_level: Vec<HashSet<usize>> = Vec::new();
    for n in 1..=top {
        let degenerate: HashSet<usize> = (0..n)
            .flat_map(|i| {
                let s = t.degeneracy(n - 1, i);
                s.object_table().iter().map(|&y| t.level(n).class_of(y)).collect::<Vec<_>>()
            })
            .collect();
        let long = t.operator(&DeltaMap::new(n, vec![0, n]).expect("long edge"))?;
        let xn = t.level(n);
        let live = (0..xn.object_count())
            .filter(|&y| !degenerate.contains(&xn.class_of(y)))
            .map(|y| x1.class_of(long.on_object(y)))
            .collect();
        live_by_level.push(live);
    }
    for &x in &reps {
        let name = format!("finite-length@{}", x1.label(x));
        let class = x1.class_of(x);
        match live_by_level.iter().position(|live| !live.contains(&class)) {
            Some(_) => results.push(CheckResult::pass(name)),
            None => results.push(CheckResult::skipped(name, "length not reached within truncation")),
        }
    }
    Ok(AxiomReport::new("finiteness", results))
}

fn verdict_discrete(name: String, discrete: bool) -> CheckResult {
    if discrete {
        CheckResult::pass(name)
    } else {
        CheckResult::fail(name, "fibre has a non-trivial automorphism")
    }
}
