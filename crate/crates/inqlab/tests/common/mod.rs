#![allow(dead_code)]

use std::collections::HashSet;

use inqlab::algebra::{
    algebra_isomorphism, derive_tables, lifted_core_join, validate_dep_algebra, validate_inq_algebra, FiniteAlgebra,
    Flavour,
};
use inqlab::duality::dual_algebra;
use inqlab::team::{enumerate_frames, Frame, Model};
use inqlab::Formula;

pub struct ZooEntry {
    pub name: String,
    pub algebra: FiniteAlgebra,
    pub flavour: Flavour,
}

pub fn names(ns: &[&str]) -> Vec<String> {
    ns.iter().map(|s| s.to_string()).collect()
}

pub fn chain3(core: &[usize]) -> FiniteAlgebra {
    derive_tables(names(&["0", "s'", "1"]), &[(0, 1), (1, 2)], 0)
        .unwrap()
        .with_core(core)
}

pub fn boolean_square() -> FiniteAlgebra {
    derive_tables(names(&["0", "a", "b", "1"]), &[(0, 1), (0, 2), (1, 3), (2, 3)], 0).unwrap()
}

/// Posets, up to isomorphism, with at most `max_up` upsets; built by adding a new minimal element
/// below an upset of a smaller poset.
pub fn small_posets(max_up: usize) -> Vec<Frame> {
    let mut seen = HashSet::new();
    let mut all = Vec::new();
    let mut level = vec![Frame::discrete(1)];
    seen.insert(Frame::discrete(1).canonical_code());
    while !level.is_empty() {
        all.extend(level.iter().cloned());
        let mut next = Vec::new();
        for p in &level {
            let n = p.size();
            for u in p.upsets() {
                let mut pairs: Vec<(usize, usize)> = u.worlds().map(|w| (0, w + 1)).collect();
                for i in 0..n {
                    for j in 0..n {
                        if p.r(i, j) {
                            pairs.push((i + 1, j + 1));
                        }
                    }
                }
                let names = (1..=n + 1).map(|i| format!("w{i}")).collect();
                let q = Frame::poset(names, &pairs).unwrap();
                if q.upsets().len() <= max_up && seen.insert(q.canonical_code()) {
                    next.push(q);
                }
            }
        }
        level = next;
    }
    all
}

/// `Up(P)` ordered by inclusion, full core.
pub fn upset_algebra(p: &Frame) -> FiniteAlgebra {
    let ups = p.upsets();
    let names = ups
        .iter()
        .map(|&t| format!("{{{}}}", p.team_names(t).join(",")))
        .collect();
    let mut pairs = Vec::new();
    for (i, s) in ups.iter().enumerate() {
        for (j, t) in ups.iter().enumerate() {
            if s.is_subset(*t) {
                pairs.push((i, j));
            }
        }
    }
    derive_tables(names, &pairs, 0).unwrap()
}

/// Every finite distributive lattice with 2..=8 elements, once each.
pub fn heyting_lattices() -> Vec<FiniteAlgebra> {
    let mut out: Vec<FiniteAlgebra> = Vec::new();
    for p in small_posets(8) {
        let h = upset_algebra(&p);
        if !out.iter().any(|g| algebra_isomorphism(g, &h).is_some()) {
            out.push(h);
        }
    }
    out
}

/// Validated algebras with at most 8 elements, in both flavours.
pub fn zoo() -> Vec<ZooEntry> {
    let mut out = vec![
        ZooEntry {
            name: "chain3/core{0,1}".into(),
            algebra: chain3(&[0, 2]),
            flavour: Flavour::Inq,
        },
        ZooEntry {
            name: "chain3/full".into(),
            algebra: chain3(&[0, 1, 2]),
            flavour: Flavour::Inq,
        },
    ];
    let sq = boolean_square();
    let j = sq.clone();
    out.push(ZooEntry {
        name: "boolean2x2/tensor=join".into(),
        algebra: sq.with_tensor_fn(|x, y| j.join(x, y)),
        flavour: Flavour::Dep,
    });
    for (i, h) in heyting_lattices().into_iter().enumerate() {
        let n = h.len();
        let (zero, one) = (h.zero(), h.one());
        let inner: Vec<usize> = h.elems().filter(|&e| e != zero && e != one).collect();
        for mask in 0..1u32 << inner.len() {
            let mut core = vec![zero, one];
            core.extend((0..inner.len()).filter(|&k| mask >> k & 1 == 1).map(|k| inner[k]));
            let a = h.clone().with_core(&core);
            if validate_inq_algebra(&a).is_err() {
                continue;
            }
            let tag = format!("H{i}[{n}]/core{mask:b}");
            let table = lifted_core_join(&a);
            let d = a.clone().with_tensor(table).unwrap();
            if validate_dep_algebra(&d).is_ok() {
                out.push(ZooEntry {
                    name: format!("{tag}/dep"),
                    algebra: d,
                    flavour: Flavour::Dep,
                });
            }
            out.push(ZooEntry {
                name: tag,
                algebra: a,
                flavour: Flavour::Inq,
            });
        }
    }
    for f in enumerate_frames(3, true) {
        for flavour in [Flavour::Inq, Flavour::Dep] {
            let d = dual_algebra(&f, flavour).unwrap();
            if d.algebra.len() <= 8 {
                out.push(ZooEntry {
                    name: format!("dual{:?}/{flavour}", f.canonical_code()),
                    algebra: d.algebra,
                    flavour,
                });
            }
        }
    }
    out
}

/// Team support computed straight from the clauses, over explicit world lists.
pub fn naive_support(m: &Model, t: &[usize], phi: &Formula) -> bool {
    let f = m.frame();
    match phi {
        Formula::Atom(p) => t.iter().all(|&w| m.truth(p).contains(w)),
        Formula::Bot => t.is_empty(),
        Formula::And(l, r) => naive_support(m, t, l) && naive_support(m, t, r),
        Formula::Or(l, r) => naive_support(m, t, l) || naive_support(m, t, r),
        Formula::Impl(l, r) => {
            let ext: Vec<usize> = (0..f.size()).filter(|&v| t.iter().any(|&w| f.r(w, v))).collect();
            subsets(&ext)
                .iter()
                .all(|s| !naive_support(m, s, l) || naive_support(m, s, r))
        }
        Formula::Tensor(l, r) => {
            let subs = subsets(t);
            subs.iter().any(|s| {
                naive_support(m, s, l)
                    && subs.iter().any(|q| {
                        let mut u: Vec<usize> = s.iter().chain(q.iter()).copied().collect();
                        u.sort();
                        u.dedup();
                        u == t && naive_support(m, q, r)
                    })
            })
        }
    }
}

pub fn subsets(xs: &[usize]) -> Vec<Vec<usize>> {
    (0..1usize << xs.len())
        .map(|mask| (0..xs.len()).filter(|&i| mask >> i & 1 == 1).map(|i| xs[i]).collect())
        .collect()
}

/// Every persistent valuation of `atoms` on every frame with at most `max` worlds, up to
/// isomorphism of frames.
pub fn small_models(max: usize, atoms: &[&str]) -> Vec<Model> {
    let atoms: Vec<String> = atoms.iter().map(|s| s.to_string()).collect();
    enumerate_frames(max, true)
        .iter()
        .flat_map(|f| inqlab::team::Valuations::new(f, &atoms).collect::<Vec<_>>())
        .collect()
}
