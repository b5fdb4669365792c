//! Finite inquisitive and dependence algebras.
//!
//! An algebra is a finite lattice given by its order, with meet, join and
//! implication tables derived from that order, a flagged core and, for the
//! dependence flavour, a tensor table. Implication is filled in everywhere by
//! `x -> y = V{c : c & x <= y}`; the validators only inspect it on the core and
//! on the core closure `<A_c>`.

use std::collections::{BTreeMap, HashMap, HashSet};
use std::fmt;

use rayon::prelude::*;
use thiserror::Error;

use crate::formula::{dnf, Dag, Formula, Node};

/// Index of an element in an algebra's carrier.
pub type Elem = usize;

/// Atoms mapped to core elements.
pub type CoreValuation = BTreeMap<String, Elem>;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Flavour {
    Inq,
    Dep,
}

impl fmt::Display for Flavour {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Flavour::Inq => "inq",
            Flavour::Dep => "dep",
        })
    }
}

impl std::str::FromStr for Flavour {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "inq" => Ok(Flavour::Inq),
            "dep" => Ok(Flavour::Dep),
            _ => Err(format!("unknown flavour {s:?}; expected inq or dep")),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum AlgebraError {
    #[error("the carrier is empty")]
    Empty,
    #[error("duplicate element {0:?}")]
    DuplicateElement(String),
    #[error("unknown element {0:?}")]
    UnknownElement(String),
    #[error("order is not antisymmetric on {0} and {1}")]
    NotAntisymmetric(String, String),
    #[error("{0} is not the least element")]
    NotBottom(String),
    #[error("{0} and {1} have no {2}")]
    NotALattice(String, String, &'static str),
    #[error("{0} is not a core element")]
    NotCore(String),
    #[error("no value for atom {0}")]
    MissingAtom(String),
    #[error("the algebra has no tensor table")]
    MissingTensor,
    #[error("tensor table must be {0}x{0}")]
    TensorShape(usize),
    #[error("{0} is not in the core closure")]
    NotInCoreClosure(String),
    #[error("{0} is not a core element, so it cannot generate a subalgebra")]
    NotCoreSubset(String),
    #[error("the chosen element is the top")]
    XIsTop,
    #[error("the formula is valid in the algebra")]
    PhiIsValid,
    #[error("the algebra is not well-connected")]
    NotWellConnected,
    #[error("not a Heyting algebra: {0}")]
    NotHeyting(Violation),
}

/// The first failed law, with its witnesses spelled out.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Violation {
    pub law: &'static str,
    pub detail: String,
}

impl Violation {
    fn new(law: &'static str, detail: String) -> Violation {
        Violation { law, detail }
    }
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "violation({}, {})", self.law, self.detail)
    }
}

impl std::error::Error for Violation {}

/// Which operations a closure computation applies.
#[derive(Clone, Copy, Debug, Default)]
pub struct Ops {
    pub meet: bool,
    pub join: bool,
    pub imp: bool,
    pub zero: bool,
    pub tensor: bool,
}

impl Ops {
    /// `{&, \/, ->, 0}`, plus tensor for the dependence flavour.
    pub fn all(flavour: Flavour) -> Ops {
        Ops {
            meet: true,
            join: true,
            imp: true,
            zero: true,
            tensor: flavour == Flavour::Dep,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FiniteAlgebra {
    names: Vec<String>,
    leq: Vec<bool>,
    meet: Vec<Elem>,
    join: Vec<Elem>,
    imp: Vec<Elem>,
    zero: Elem,
    one: Elem,
    core: Vec<bool>,
    tensor: Option<Vec<Elem>>,
}

/// Lattice tables from a partial order given as pairs; the reflexive-transitive closure is taken.
///
/// The core starts out as the whole carrier.
pub fn derive_tables(names: Vec<String>, pairs: &[(Elem, Elem)], zero: Elem) -> Result<FiniteAlgebra, AlgebraError> {
    let n = names.len();
    let mut leq = vec![false; n * n];
    for i in 0..n {
        leq[i * n + i] = true;
    }
    for &(a, b) in pairs {
        if a >= n || b >= n {
            return Err(AlgebraError::UnknownElement(format!("#{}", a.max(b))));
        }
        leq[a * n + b] = true;
    }
    for k in 0..n {
        for i in 0..n {
            if leq[i * n + k] {
                for j in 0..n {
                    if leq[k * n + j] {
                        leq[i * n + j] = true;
                    }
                }
            }
        }
    }
    FiniteAlgebra::from_order(names, leq, zero)
}

impl FiniteAlgebra {
    /// Tables from a reflexive, transitive order matrix (row-major, `leq[a*n+b]` iff `a <= b`).
    pub fn from_order(names: Vec<String>, leq: Vec<bool>, zero: Elem) -> Result<Self, AlgebraError> {
        let n = names.len();
        if n == 0 {
            return Err(AlgebraError::Empty);
        }
        assert_eq!(leq.len(), n * n, "order matrix shape");
        let mut seen = HashSet::new();
        if let Some(d) = names.iter().find(|x| !seen.insert(*x)) {
            return Err(AlgebraError::DuplicateElement(d.clone()));
        }
        for a in 0..n {
            for b in a + 1..n {
                if leq[a * n + b] && leq[b * n + a] {
                    return Err(AlgebraError::NotAntisymmetric(names[a].clone(), names[b].clone()));
                }
            }
        }
        if zero >= n {
            return Err(AlgebraError::UnknownElement(format!("#{zero}")));
        }
        if let Some(x) = (0..n).find(|&x| !leq[zero * n + x]) {
            let _ = x;
            return Err(AlgebraError::NotBottom(names[zero].clone()));
        }
        let le = |a: Elem, b: Elem| leq[a * n + b];
        let bound = |a: Elem, b: Elem, upper: bool| -> Option<Elem> {
            let cands: Vec<Elem> = (0..n)
                .filter(|&c| {
                    if upper {
                        le(a, c) && le(b, c)
                    } else {
                        le(c, a) && le(c, b)
                    }
                })
                .collect();
            cands
                .iter()
                .copied()
                .find(|&c| cands.iter().all(|&d| if upper { le(c, d) } else { le(d, c) }))
        };
        let mut meet = vec![0; n * n];
        let mut join = vec![0; n * n];
        for a in 0..n {
            for b in a..n {
                let m = bound(a, b, false)
                    .ok_or_else(|| AlgebraError::NotALattice(names[a].clone(), names[b].clone(), "meet"))?;
                let j = bound(a, b, true)
                    .ok_or_else(|| AlgebraError::NotALattice(names[a].clone(), names[b].clone(), "join"))?;
                meet[a * n + b] = m;
                meet[b * n + a] = m;
                join[a * n + b] = j;
                join[b * n + a] = j;
            }
        }
        let one = (0..n)
            .find(|&x| (0..n).all(|y| le(y, x)))
            .expect("finite lattices have a top");
        let mut imp = vec![0; n * n];
        for x in 0..n {
            for y in 0..n {
                imp[x * n + y] = (0..n)
                    .filter(|&c| le(meet[c * n + x], y))
                    .fold(zero, |acc, c| join[acc * n + c]);
            }
        }
        Ok(FiniteAlgebra {
            names,
            leq,
            meet,
            join,
            imp,
            zero,
            one,
            core: vec![true; n],
            tensor: None,
        })
    }

    /// Assemble from precomputed tables; the caller vouches for their consistency.
    #[allow(clippy::too_many_arguments)]
    pub(crate) fn from_parts(
        names: Vec<String>,
        leq: Vec<bool>,
        meet: Vec<Elem>,
        join: Vec<Elem>,
        imp: Vec<Elem>,
        zero: Elem,
        one: Elem,
        core: Vec<bool>,
        tensor: Option<Vec<Elem>>,
    ) -> Self {
        FiniteAlgebra {
            names,
            leq,
            meet,
            join,
            imp,
            zero,
            one,
            core,
            tensor,
        }
    }

    pub fn with_core(mut self, core: &[Elem]) -> Self {
        self.core = vec![false; self.len()];
        for &c in core {
            self.core[c] = true;
        }
        self
    }

    pub fn with_core_flags(mut self, flags: Vec<bool>) -> Self {
        assert_eq!(flags.len(), self.len());
        self.core = flags;
        self
    }

    /// Attach a tensor table given row by row.
    pub fn with_tensor(mut self, table: Vec<Elem>) -> Result<Self, AlgebraError> {
        let n = self.len();
        if table.len() != n * n || table.iter().any(|&e| e >= n) {
            return Err(AlgebraError::TensorShape(n));
        }
        self.tensor = Some(table);
        Ok(self)
    }

    pub fn with_tensor_fn(self, f: impl Fn(Elem, Elem) -> Elem) -> Self {
        let n = self.len();
        let table = (0..n * n).map(|i| f(i / n, i % n)).collect();
        self.with_tensor(table).expect("table from a function over the carrier")
    }

    pub fn without_tensor(mut self) -> Self {
        self.tensor = None;
        self
    }

    pub fn with_names(mut self, names: Vec<String>) -> Self {
        assert_eq!(names.len(), self.len());
        self.names = names;
        self
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }

    pub fn elems(&self) -> std::ops::Range<Elem> {
        0..self.len()
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn name(&self, e: Elem) -> &str {
        &self.names[e]
    }

    pub fn elem(&self, name: &str) -> Option<Elem> {
        self.names.iter().position(|n| n == name)
    }

    pub fn leq(&self, a: Elem, b: Elem) -> bool {
        self.leq[a * self.len() + b]
    }

    pub fn lt(&self, a: Elem, b: Elem) -> bool {
        a != b && self.leq(a, b)
    }

    pub fn meet(&self, a: Elem, b: Elem) -> Elem {
        self.meet[a * self.len() + b]
    }

    pub fn join(&self, a: Elem, b: Elem) -> Elem {
        self.join[a * self.len() + b]
    }

    pub fn imp(&self, a: Elem, b: Elem) -> Elem {
        self.imp[a * self.len() + b]
    }

    pub fn neg(&self, a: Elem) -> Elem {
        self.imp(a, self.zero)
    }

    pub fn tensor(&self, a: Elem, b: Elem) -> Option<Elem> {
        self.tensor.as_ref().map(|t| t[a * self.len() + b])
    }

    pub fn has_tensor(&self) -> bool {
        self.tensor.is_some()
    }

    pub fn flavour(&self) -> Flavour {
        if self.has_tensor() {
            Flavour::Dep
        } else {
            Flavour::Inq
        }
    }

    pub fn zero(&self) -> Elem {
        self.zero
    }

    /// The top element, which is also `0 -> 0`.
    pub fn one(&self) -> Elem {
        self.one
    }

    pub fn is_core(&self, a: Elem) -> bool {
        self.core[a]
    }

    pub fn core(&self) -> Vec<Elem> {
        self.elems().filter(|&a| self.core[a]).collect()
    }

    pub fn core_flags(&self) -> &[bool] {
        &self.core
    }

    /// Hasse covers `(a, b)` with `a < b`.
    pub fn covers(&self) -> Vec<(Elem, Elem)> {
        let mut out = Vec::new();
        for a in self.elems() {
            for b in self.elems().filter(|&b| self.lt(a, b)) {
                if !self.elems().any(|c| self.lt(a, c) && self.lt(c, b)) {
                    out.push((a, b));
                }
            }
        }
        out
    }

    /// Least fixed point containing `gens` under the selected operations.
    pub fn closure(&self, gens: impl IntoIterator<Item = Elem>, ops: Ops) -> Vec<bool> {
        let mut member = vec![false; self.len()];
        let mut list = Vec::new();
        let mut queue = Vec::new();
        let add = |x: Elem, member: &mut Vec<bool>, queue: &mut Vec<Elem>| {
            if !member[x] {
                member[x] = true;
                queue.push(x);
            }
        };
        for g in gens {
            add(g, &mut member, &mut queue);
        }
        if ops.zero {
            add(self.zero, &mut member, &mut queue);
        }
        if ops.tensor && self.tensor.is_none() {
            panic!("tensor closure requested on an algebra without tensor");
        }
        while let Some(x) = queue.pop() {
            list.push(x);
            for &y in &list {
                for (u, v) in [(x, y), (y, x)] {
                    if ops.meet {
                        add(self.meet(u, v), &mut member, &mut queue);
                    }
                    if ops.join {
                        add(self.join(u, v), &mut member, &mut queue);
                    }
                    if ops.imp {
                        add(self.imp(u, v), &mut member, &mut queue);
                    }
                    if ops.tensor {
                        add(self.tensor(u, v).expect("checked"), &mut member, &mut queue);
                    }
                }
            }
        }
        member
    }

    /// `<A_c>` for the given flavour.
    pub fn core_closure(&self, flavour: Flavour) -> Vec<bool> {
        self.closure(self.core(), Ops::all(flavour))
    }

    fn own_core_closure(&self) -> Vec<Elem> {
        members(&self.core_closure(self.flavour()))
    }

    /// Copy of the algebra restricted to `keep`, which must be closed under the tables,
    /// together with the embedding of new indices into old ones.
    pub fn restrict(&self, keep: &[bool]) -> (FiniteAlgebra, Vec<Elem>) {
        let old: Vec<Elem> = members(keep);
        let mut new_of = vec![usize::MAX; self.len()];
        for (i, &o) in old.iter().enumerate() {
            new_of[o] = i;
        }
        let m = old.len();
        let remap = |table: &dyn Fn(Elem, Elem) -> Elem| -> Option<Vec<Elem>> {
            let mut out = Vec::with_capacity(m * m);
            for &a in &old {
                for &b in &old {
                    let v = new_of[table(a, b)];
                    if v == usize::MAX {
                        return None;
                    }
                    out.push(v);
                }
            }
            Some(out)
        };
        let meet = remap(&|a, b| self.meet(a, b)).expect("closed under meet");
        let join = remap(&|a, b| self.join(a, b)).expect("closed under join");
        let imp = remap(&|a, b| self.imp(a, b)).expect("closed under implication");
        let tensor = self
            .tensor
            .as_ref()
            .and_then(|_| remap(&|a, b| self.tensor(a, b).expect("present")));
        let leq = old
            .iter()
            .flat_map(|&a| old.iter().map(move |&b| (a, b)))
            .map(|(a, b)| self.leq(a, b))
            .collect();
        let top = (0..m)
            .find(|&x| old.iter().all(|&y| self.leq(y, old[x])))
            .expect("closed under join");
        let sub = FiniteAlgebra {
            names: old.iter().map(|&o| self.names[o].clone()).collect(),
            leq,
            meet,
            join,
            imp,
            zero: new_of[self.zero],
            one: top,
            core: old.iter().map(|&o| self.core[o]).collect(),
            tensor,
        };
        (sub, old)
    }

    fn show(&self, e: Elem) -> &str {
        &self.names[e]
    }
}

fn members(flags: &[bool]) -> Vec<Elem> {
    flags.iter().enumerate().filter(|(_, &f)| f).map(|(i, _)| i).collect()
}

// ---------------------------------------------------------------------------
// Validation

fn check_heyting(a: &FiniteAlgebra, c: &[Elem]) -> Result<(), Violation> {
    for &x in c {
        for &y in c {
            for &z in c {
                if a.meet(x, a.join(y, z)) != a.join(a.meet(x, y), a.meet(x, z)) {
                    return Err(Violation::new(
                        "distributivity",
                        format!("{} & ({} \\/ {})", a.show(x), a.show(y), a.show(z)),
                    ));
                }
                if a.leq(a.meet(x, y), z) != a.leq(x, a.imp(y, z)) {
                    return Err(Violation::new(
                        "residuation",
                        format!(
                            "{} & {} <= {} vs {} <= {} -> {}",
                            a.show(x),
                            a.show(y),
                            a.show(z),
                            a.show(x),
                            a.show(y),
                            a.show(z)
                        ),
                    ));
                }
            }
        }
    }
    Ok(())
}

/// Whether the whole carrier is a Heyting algebra under the tables.
pub fn is_heyting(a: &FiniteAlgebra) -> bool {
    check_heyting(a, &a.elems().collect::<Vec<_>>()).is_ok()
}

fn check_core_closed(a: &FiniteAlgebra, with_tensor: bool) -> Result<(), Violation> {
    if !a.is_core(a.zero) {
        return Err(Violation::new("core-closure", format!("0 = {}", a.show(a.zero))));
    }
    let core = a.core();
    for &x in &core {
        for &y in &core {
            let checks = [
                ("&", Some(a.meet(x, y))),
                ("->", Some(a.imp(x, y))),
                ("(*)", if with_tensor { a.tensor(x, y) } else { None }),
            ];
            for (op, v) in checks {
                if let Some(v) = v {
                    if !a.is_core(v) {
                        return Err(Violation::new(
                            "core-closure",
                            format!("{} {op} {} = {}", a.show(x), a.show(y), a.show(v)),
                        ));
                    }
                }
            }
        }
    }
    Ok(())
}

fn check_split(a: &FiniteAlgebra, c: &[Elem]) -> Result<(), Violation> {
    for x0 in a.core() {
        for &x in c {
            for &y in c {
                if a.imp(x0, a.join(x, y)) != a.join(a.imp(x0, x), a.imp(x0, y)) {
                    return Err(Violation::new(
                        "split",
                        format!("{} -> ({} \\/ {})", a.show(x0), a.show(x), a.show(y)),
                    ));
                }
            }
        }
    }
    Ok(())
}

/// Core closed under `&`, `->`, `0`; `<A_c>` Heyting; Split.
pub fn validate_inq_algebra(a: &FiniteAlgebra) -> Result<(), Violation> {
    check_core_closed(a, false)?;
    let c = members(&a.core_closure(Flavour::Inq));
    check_heyting(a, &c)?;
    check_split(a, &c)
}

/// The inquisitive checks, a Heyting core with tensor as its join, Dist and Mon.
///
/// Mon is checked as the inequality `(x -> z) & (y -> k) <= (x (*) y) -> (z (*) k)`,
/// the algebraic reading of A14.
pub fn validate_dep_algebra(a: &FiniteAlgebra) -> Result<(), Violation> {
    if !a.has_tensor() {
        return Err(Violation::new("tensor", "no tensor table".into()));
    }
    let t = |x, y| a.tensor(x, y).expect("present");
    check_core_closed(a, true)?;
    let core = a.core();
    for &x in &core {
        for &y in &core {
            let j = t(x, y);
            let least =
                a.leq(x, j) && a.leq(y, j) && core.iter().all(|&c| !(a.leq(x, c) && a.leq(y, c)) || a.leq(j, c));
            if !least {
                return Err(Violation::new(
                    "core-join",
                    format!("{} (*) {} = {}", a.show(x), a.show(y), a.show(j)),
                ));
            }
        }
    }
    for &x in &core {
        for &y in &core {
            for &z in &core {
                if a.meet(x, t(y, z)) != t(a.meet(x, y), a.meet(x, z)) {
                    return Err(Violation::new(
                        "core-distributivity",
                        format!("{} & ({} (*) {})", a.show(x), a.show(y), a.show(z)),
                    ));
                }
                if a.leq(a.meet(x, y), z) != a.leq(x, a.imp(y, z)) {
                    return Err(Violation::new(
                        "core-residuation",
                        format!("{} & {} <= {}", a.show(x), a.show(y), a.show(z)),
                    ));
                }
            }
        }
    }
    let c = members(&a.core_closure(Flavour::Dep));
    check_heyting(a, &c)?;
    check_split(a, &c)?;
    for &x in &c {
        for &y in &c {
            for &z in &c {
                if t(x, a.join(y, z)) != a.join(t(x, y), t(x, z)) {
                    return Err(Violation::new(
                        "dist",
                        format!("{} (*) ({} \\/ {})", a.show(x), a.show(y), a.show(z)),
                    ));
                }
            }
        }
    }
    for &x in &c {
        for &z in &c {
            let xz = a.imp(x, z);
            for &y in &c {
                let xy = t(x, y);
                for &k in &c {
                    if !a.leq(a.meet(xz, a.imp(y, k)), a.imp(xy, t(z, k))) {
                        return Err(Violation::new(
                            "mon",
                            format!("x={} y={} z={} k={}", a.show(x), a.show(y), a.show(z), a.show(k)),
                        ));
                    }
                }
            }
        }
    }
    Ok(())
}

pub fn validate(a: &FiniteAlgebra, flavour: Flavour) -> Result<(), Violation> {
    match flavour {
        Flavour::Inq => validate_inq_algebra(a),
        Flavour::Dep => validate_dep_algebra(a),
    }
}

// ---------------------------------------------------------------------------
// Core semantics

fn eval_nodes(a: &FiniteAlgebra, dag: &Dag, atoms: &[Elem]) -> Elem {
    let mut val = vec![0; dag.nodes.len()];
    for (i, node) in dag.nodes.iter().enumerate() {
        val[i] = match *node {
            Node::Atom(k) => atoms[k],
            Node::Bot => a.zero,
            Node::And(l, r) => a.meet(val[l], val[r]),
            Node::Or(l, r) => a.join(val[l], val[r]),
            Node::Impl(l, r) => a.imp(val[l], val[r]),
            Node::Tensor(l, r) => a.tensor(val[l], val[r]).expect("tensor presence checked"),
        };
    }
    val[dag.root]
}

fn check_formula(a: &FiniteAlgebra, dag: &Dag) -> Result<(), AlgebraError> {
    if dag.uses_tensor() && !a.has_tensor() {
        return Err(AlgebraError::MissingTensor);
    }
    Ok(())
}

/// The interpretation of `phi` under the core valuation `mu`.
pub fn eval_core(a: &FiniteAlgebra, mu: &CoreValuation, phi: &Formula) -> Result<Elem, AlgebraError> {
    let dag = Dag::new(phi);
    check_formula(a, &dag)?;
    let mut vals = Vec::with_capacity(dag.atoms.len());
    for p in &dag.atoms {
        let &v = mu.get(p).ok_or_else(|| AlgebraError::MissingAtom(p.clone()))?;
        if v >= a.len() {
            return Err(AlgebraError::UnknownElement(format!("#{v}")));
        }
        if !a.is_core(v) {
            return Err(AlgebraError::NotCore(a.name(v).to_string()));
        }
        vals.push(v);
    }
    Ok(eval_nodes(a, &dag, &vals))
}

/// The first core valuation of the atoms of `phi` sending it below the top, if any.
pub fn refuting_valuation(a: &FiniteAlgebra, phi: &Formula) -> Result<Option<CoreValuation>, AlgebraError> {
    let dag = Dag::new(phi);
    check_formula(a, &dag)?;
    let core = a.core();
    let k = dag.atoms.len();
    let total = (0..k).fold(1usize, |acc, _| acc.saturating_mul(core.len()));
    let decode = |mut i: usize| -> Vec<Elem> {
        let mut v = vec![0; k];
        for slot in v.iter_mut().rev() {
            *slot = core[i % core.len()];
            i /= core.len();
        }
        v
    };
    let refutes = |i: usize| {
        let v = decode(i);
        (eval_nodes(a, &dag, &v) != a.one).then_some(v)
    };
    let hit = if total < 2048 {
        (0..total).find_map(refutes)
    } else {
        (0..total).into_par_iter().find_map_first(refutes)
    };
    Ok(hit.map(|v| dag.atoms.iter().cloned().zip(v).collect()))
}

/// Truth under every core valuation of the atoms of `phi`.
pub fn algebra_valid(a: &FiniteAlgebra, phi: &Formula) -> Result<bool, AlgebraError> {
    Ok(refuting_valuation(a, phi)?.is_none())
}

// ---------------------------------------------------------------------------
// Horn translation

/// A term in the signature `{0, &, \/, ->, (*)}` over numbered variables.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Term {
    Var(usize),
    Zero,
    Meet(Box<Term>, Box<Term>),
    Join(Box<Term>, Box<Term>),
    Imp(Box<Term>, Box<Term>),
    Tensor(Box<Term>, Box<Term>),
}

impl Term {
    /// The term read off a formula, variables numbered by position in `vars`.
    pub fn of_formula(phi: &Formula, vars: &[String]) -> Term {
        let bx = |f: &Formula| Box::new(Term::of_formula(f, vars));
        match phi {
            Formula::Atom(p) => Term::Var(vars.iter().position(|v| v == p).expect("variable listed")),
            Formula::Bot => Term::Zero,
            Formula::And(l, r) => Term::Meet(bx(l), bx(r)),
            Formula::Or(l, r) => Term::Join(bx(l), bx(r)),
            Formula::Impl(l, r) => Term::Imp(bx(l), bx(r)),
            Formula::Tensor(l, r) => Term::Tensor(bx(l), bx(r)),
        }
    }

    /// `0 -> 0`.
    pub fn one() -> Term {
        Term::Imp(Box::new(Term::Zero), Box::new(Term::Zero))
    }

    fn uses_tensor(&self) -> bool {
        match self {
            Term::Var(_) | Term::Zero => false,
            Term::Tensor(..) => true,
            Term::Meet(l, r) | Term::Join(l, r) | Term::Imp(l, r) => l.uses_tensor() || r.uses_tensor(),
        }
    }

    fn value(&self, a: &FiniteAlgebra, env: &[Elem]) -> Elem {
        match self {
            Term::Var(i) => env[*i],
            Term::Zero => a.zero(),
            Term::Meet(l, r) => a.meet(l.value(a, env), r.value(a, env)),
            Term::Join(l, r) => a.join(l.value(a, env), r.value(a, env)),
            Term::Imp(l, r) => a.imp(l.value(a, env), r.value(a, env)),
            Term::Tensor(l, r) => a.tensor(l.value(a, env), r.value(a, env)).expect("checked"),
        }
    }
}

/// `forall x (core(x_0) & .. & core(x_n) => lhs = rhs)`, evaluated by running over all carrier
/// tuples and discarding those outside the core.
fn horn_sentence(a: &FiniteAlgebra, vars: usize, lhs: &Term, rhs: &Term) -> Result<bool, AlgebraError> {
    if (lhs.uses_tensor() || rhs.uses_tensor()) && !a.has_tensor() {
        return Err(AlgebraError::MissingTensor);
    }
    let n = a.len();
    let mut env = vec![0; vars];
    loop {
        if env.iter().all(|&x| a.is_core(x)) && lhs.value(a, &env) != rhs.value(a, &env) {
            return Ok(false);
        }
        let mut i = vars;
        loop {
            if i == 0 {
                return Ok(true);
            }
            i -= 1;
            env[i] += 1;
            if env[i] < n {
                break;
            }
            env[i] = 0;
        }
    }
}

/// The relativised universal Horn sentence `phi = 1`.
pub fn horn_check(a: &FiniteAlgebra, phi: &Formula) -> Result<bool, AlgebraError> {
    let vars: Vec<String> = phi.atoms().into_iter().collect();
    horn_sentence(a, vars.len(), &Term::of_formula(phi, &vars), &Term::one())
}

/// The relativised universal Horn sentence `eps = delta`.
pub fn horn_check_equation(a: &FiniteAlgebra, eps: &Formula, delta: &Formula) -> Result<bool, AlgebraError> {
    let mut vars: Vec<String> = eps.atoms().into_iter().collect();
    vars.extend(delta.atoms());
    vars.sort();
    vars.dedup();
    horn_sentence(
        a,
        vars.len(),
        &Term::of_formula(eps, &vars),
        &Term::of_formula(delta, &vars),
    )
}

// ---------------------------------------------------------------------------
// Structure

/// Elements of `<A_c>` that are not the join of two strictly smaller elements of `<A_c>`.
/// The bottom counts, since it is no such join.
pub fn join_irreducibles(a: &FiniteAlgebra) -> Vec<Elem> {
    let c = a.own_core_closure();
    c.iter()
        .copied()
        .filter(|&x| {
            !c.iter()
                .any(|&y| a.lt(y, x) && c.iter().any(|&z| a.lt(z, x) && a.join(y, z) == x))
        })
        .collect()
}

/// `x \/ y = 1` forces `x = 1` or `y = 1` within `<A_c>`.
pub fn is_well_connected(a: &FiniteAlgebra) -> bool {
    let c = a.own_core_closure();
    let one = a.one();
    c.iter()
        .all(|&x| c.iter().all(|&y| a.join(x, y) != one || x == one || y == one))
}

/// The carrier equals `<A_c>`.
pub fn is_core_generated(a: &FiniteAlgebra) -> bool {
    a.core_closure(a.flavour()).iter().all(|&m| m)
}

/// Finite, core-generated and well-connected.
pub fn is_fcgw(a: &FiniteAlgebra) -> bool {
    is_core_generated(a) && is_well_connected(a)
}

/// The unique coatom of `<A_c>`, if there is exactly one.
pub fn second_greatest(a: &FiniteAlgebra) -> Option<Elem> {
    let c = a.own_core_closure();
    let one = a.one();
    let below: Vec<Elem> = c.iter().copied().filter(|&x| x != one).collect();
    let coatoms: Vec<Elem> = below
        .iter()
        .copied()
        .filter(|&x| !below.iter().any(|&y| a.lt(x, y)))
        .collect();
    match coatoms[..] {
        [s] => Some(s),
        _ => None,
    }
}

/// Maximal core elements below `x`.
pub fn disjunctive_rep(a: &FiniteAlgebra, x: Elem) -> Result<Vec<Elem>, AlgebraError> {
    if !a.core_closure(a.flavour())[x] {
        return Err(AlgebraError::NotInCoreClosure(a.name(x).to_string()));
    }
    let below: Vec<Elem> = a.core().into_iter().filter(|&c| a.leq(c, x)).collect();
    Ok(below
        .iter()
        .copied()
        .filter(|&c| !below.iter().any(|&d| a.lt(c, d)))
        .collect())
}

/// The inquisitive subalgebra generated by core elements `gens`.
///
/// The core is the closure of `gens` under `&`, `->`, `0`; the carrier adds finite meets and
/// joins. Implication is recomputed on the carrier from disjunctive representations: for
/// `x = V c_i` and `y = V d_j`, `x -> y = V_f  &_i (c_i -> d_f(i))`.
pub fn generated_subalgebra(a: &FiniteAlgebra, gens: &[Elem]) -> Result<FiniteAlgebra, AlgebraError> {
    if let Some(&g) = gens.iter().find(|&&g| !a.is_core(g)) {
        return Err(AlgebraError::NotCoreSubset(a.name(g).to_string()));
    }
    let y = a.closure(
        gens.iter().copied(),
        Ops {
            meet: true,
            imp: true,
            zero: true,
            ..Ops::default()
        },
    );
    let z = a.closure(
        members(&y),
        Ops {
            meet: true,
            join: true,
            ..Ops::default()
        },
    );
    let (mut sub, old) = a.restrict_lattice(&z);
    let ys: Vec<Elem> = (0..old.len()).filter(|&i| y[old[i]]).collect();
    let rep = |x: Elem| -> Vec<Elem> {
        let below: Vec<Elem> = ys.iter().copied().filter(|&c| sub.leq(c, x)).collect();
        below
            .iter()
            .copied()
            .filter(|&c| !below.iter().any(|&d| sub.lt(c, d)))
            .collect()
    };
    let m = sub.len();
    let reps: Vec<Vec<Elem>> = (0..m).map(rep).collect();
    let mut imp = vec![0; m * m];
    for x in 0..m {
        for yv in 0..m {
            let (cs, ds) = (&reps[x], &reps[yv]);
            let mut acc = sub.zero;
            let mut choice = vec![0usize; cs.len()];
            'functions: loop {
                let term = cs
                    .iter()
                    .zip(&choice)
                    .map(|(&c, &j)| sub.lifted_imp(a, &old, c, ds[j]))
                    .fold(sub.one, |acc, v| sub.meet(acc, v));
                acc = sub.join(acc, term);
                let mut i = cs.len();
                loop {
                    if i == 0 {
                        break 'functions;
                    }
                    i -= 1;
                    choice[i] += 1;
                    if choice[i] < ds.len() {
                        break;
                    }
                    choice[i] = 0;
                }
            }
            imp[x * m + yv] = acc;
        }
    }
    sub.imp = imp;
    sub.core = (0..m).map(|i| y[old[i]]).collect();
    sub.tensor = None;
    Ok(sub)
}

impl FiniteAlgebra {
    /// Restriction to a `&`/`\/`-closed subset; implication is left to the caller.
    fn restrict_lattice(&self, keep: &[bool]) -> (FiniteAlgebra, Vec<Elem>) {
        let old = members(keep);
        let mut new_of = vec![usize::MAX; self.len()];
        for (i, &o) in old.iter().enumerate() {
            new_of[o] = i;
        }
        let m = old.len();
        let mut leq = vec![false; m * m];
        let mut meet = vec![0; m * m];
        let mut join = vec![0; m * m];
        for i in 0..m {
            for j in 0..m {
                leq[i * m + j] = self.leq(old[i], old[j]);
                meet[i * m + j] = new_of[self.meet(old[i], old[j])];
                join[i * m + j] = new_of[self.join(old[i], old[j])];
            }
        }
        assert!(
            meet.iter().chain(&join).all(|&v| v != usize::MAX),
            "subset not a sublattice"
        );
        let zero = (0..m)
            .find(|&x| (0..m).all(|y| leq[x * m + y]))
            .expect("sublattice has a bottom");
        let one = (0..m)
            .find(|&x| (0..m).all(|y| leq[y * m + x]))
            .expect("sublattice has a top");
        let sub = FiniteAlgebra {
            names: old.iter().map(|&o| self.names[o].clone()).collect(),
            leq,
            meet,
            join,
            imp: vec![0; m * m],
            zero,
            one,
            core: vec![false; m],
            tensor: None,
        };
        (sub, old)
    }

    /// Implication of `self`'s elements `c`, `d` computed in the parent algebra.
    fn lifted_imp(&self, parent: &FiniteAlgebra, old: &[Elem], c: Elem, d: Elem) -> Elem {
        let v = parent.imp(old[c], old[d]);
        old.iter().position(|&o| o == v).expect("core closed under implication")
    }
}

// ---------------------------------------------------------------------------
// Homomorphisms and filters

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AlgebraHom {
    pub map: Vec<Elem>,
    pub flavour: Flavour,
}

impl AlgebraHom {
    pub fn identity(a: &FiniteAlgebra, flavour: Flavour) -> AlgebraHom {
        AlgebraHom {
            map: a.elems().collect(),
            flavour,
        }
    }

    pub fn apply(&self, x: Elem) -> Elem {
        self.map[x]
    }

    /// `self ∘ inner`.
    pub fn compose(&self, inner: &AlgebraHom) -> AlgebraHom {
        AlgebraHom {
            map: inner.map.iter().map(|&x| self.map[x]).collect(),
            flavour: self.flavour,
        }
    }

    pub fn is_surjective(&self, target_len: usize) -> bool {
        let mut hit = vec![false; target_len];
        for &y in &self.map {
            hit[y] = true;
        }
        hit.into_iter().all(|h| h)
    }
}

/// Commutation with `0`, `&`, `\/`, `->` (and tensor for the dependence flavour) on the whole
/// source, plus core preservation.
pub fn check_hom(src: &FiniteAlgebra, dst: &FiniteAlgebra, h: &AlgebraHom) -> Result<(), Violation> {
    if h.map.len() != src.len() || h.map.iter().any(|&y| y >= dst.len()) {
        return Err(Violation::new("shape", format!("map of length {}", h.map.len())));
    }
    let f = |x: Elem| h.map[x];
    if f(src.zero()) != dst.zero() {
        return Err(Violation::new(
            "hom-zero",
            format!("h(0) = {}", dst.name(f(src.zero()))),
        ));
    }
    if let Some(c) = src.core().into_iter().find(|&c| !dst.is_core(f(c))) {
        return Err(Violation::new(
            "hom-core",
            format!("h({}) = {}", src.name(c), dst.name(f(c))),
        ));
    }
    if h.flavour == Flavour::Dep && !(src.has_tensor() && dst.has_tensor()) {
        return Err(Violation::new("hom-tensor", "tensor table missing".into()));
    }
    for x in src.elems() {
        for y in src.elems() {
            let mut pairs = vec![
                ("&", f(src.meet(x, y)), dst.meet(f(x), f(y))),
                ("\\/", f(src.join(x, y)), dst.join(f(x), f(y))),
                ("->", f(src.imp(x, y)), dst.imp(f(x), f(y))),
            ];
            if h.flavour == Flavour::Dep {
                pairs.push(("(*)", f(src.tensor(x, y).unwrap()), dst.tensor(f(x), f(y)).unwrap()));
            }
            for (op, l, r) in pairs {
                if l != r {
                    return Err(Violation::new(
                        "hom-commutes",
                        format!(
                            "h({} {op} {}) = {} but h({}) {op} h({}) = {}",
                            src.name(x),
                            src.name(y),
                            dst.name(l),
                            src.name(x),
                            src.name(y),
                            dst.name(r)
                        ),
                    ));
                }
            }
        }
    }
    Ok(())
}

/// A subset of the carrier, flagged by membership.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Filter {
    pub members: Vec<bool>,
}

impl Filter {
    /// `{y : x <= y}`.
    pub fn principal(a: &FiniteAlgebra, x: Elem) -> Filter {
        Filter {
            members: a.elems().map(|y| a.leq(x, y)).collect(),
        }
    }

    pub fn contains(&self, x: Elem) -> bool {
        self.members[x]
    }

    /// Upward closed, closed under meets and containing the top.
    pub fn is_filter(&self, a: &FiniteAlgebra) -> bool {
        let m = &self.members;
        m[a.one()]
            && a.elems()
                .all(|x| !m[x] || a.elems().all(|y| (!a.leq(x, y) || m[y]) && (!m[y] || m[a.meet(x, y)])))
    }

    pub fn is_proper(&self, a: &FiniteAlgebra) -> bool {
        !self.members[a.zero()]
    }
}

/// Quotient by a filter maximal among those avoiding `x`, sending `x` to the second greatest
/// element of a subdirectly irreducible algebra.
///
/// Filters of a finite Heyting algebra are principal, so the maximal filters avoiding `x` are
/// `{y : a <= y}` for minimal `a` not below `x`; the smallest such index is taken. The quotient
/// identifies `u` and `v` when `u & a = v & a`, and keeps the image of the core as its core.
pub fn wronski_quotient(h: &FiniteAlgebra, x: Elem) -> Result<(AlgebraHom, FiniteAlgebra), AlgebraError> {
    if x == h.one() {
        return Err(AlgebraError::XIsTop);
    }
    check_heyting(h, &h.elems().collect::<Vec<_>>()).map_err(AlgebraError::NotHeyting)?;
    let outside: Vec<Elem> = h.elems().filter(|&a| !h.leq(a, x)).collect();
    let a = outside
        .iter()
        .copied()
        .find(|&a| !outside.iter().any(|&b| h.lt(b, a)))
        .expect("the top is never below x");
    let mut class_of_key: HashMap<Elem, Elem> = HashMap::new();
    let mut reps: Vec<Elem> = Vec::new();
    let mut map = vec![0; h.len()];
    for u in h.elems() {
        let key = h.meet(u, a);
        let class = *class_of_key.entry(key).or_insert_with(|| {
            reps.push(u);
            reps.len() - 1
        });
        map[u] = class;
    }
    let m = reps.len();
    let mut leq = vec![false; m * m];
    for i in 0..m {
        for j in 0..m {
            leq[i * m + j] = h.leq(h.meet(reps[i], a), reps[j]);
        }
    }
    let names = reps.iter().map(|&r| h.name(r).to_string()).collect();
    let mut b = FiniteAlgebra::from_order(names, leq, map[h.zero()])?;
    let mut core = vec![false; m];
    for c in h.core() {
        core[map[c]] = true;
    }
    b.core = core;
    Ok((
        AlgebraHom {
            map,
            flavour: Flavour::Inq,
        },
        b,
    ))
}

/// Tensor on the core as the least core upper bound, lifted by
/// `x (*) y = V{a (*) b : a <= x, b <= y, a, b core}`.
pub fn lifted_core_join(a: &FiniteAlgebra) -> Vec<Elem> {
    let core = a.core();
    let n = a.len();
    let lub = |x: Elem, y: Elem| -> Elem {
        core.iter()
            .copied()
            .filter(|&c| a.leq(x, c) && a.leq(y, c))
            .fold(a.one(), |acc, c| a.meet(acc, c))
    };
    let mut table = vec![0; n * n];
    for x in 0..n {
        for y in 0..n {
            let mut acc = a.zero();
            for &c in core.iter().filter(|&&c| a.leq(c, x)) {
                for &d in core.iter().filter(|&&d| a.leq(d, y)) {
                    acc = a.join(acc, lub(c, d));
                }
            }
            table[x * n + y] = acc;
        }
    }
    table
}

/// Result of a Birkhoff-style reduction.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Reduction {
    pub algebra: FiniteAlgebra,
    /// A core valuation in the reduced algebra refuting the formula.
    pub valuation: CoreValuation,
}

/// A finite, core-generated, well-connected algebra of the same flavour refuting `phi`.
///
/// Restrict to `<A_c>`, pick a refuting valuation, take the Wronski quotient at the value of
/// `phi`, keep the image of the core, and for the dependence flavour put back a tensor that is
/// the core join, lifted.
pub fn birkhoff_reduce(a: &FiniteAlgebra, phi: &Formula, flavour: Flavour) -> Result<Reduction, AlgebraError> {
    if flavour == Flavour::Dep && !a.has_tensor() {
        return Err(AlgebraError::MissingTensor);
    }
    let base = match flavour {
        Flavour::Inq => a.clone().without_tensor(),
        Flavour::Dep => a.clone(),
    };
    let (c, _) = base.restrict(&base.core_closure(flavour));
    let mu = refuting_valuation(&c, phi)?.ok_or(AlgebraError::PhiIsValid)?;
    let x = eval_core(&c, &mu, phi)?;
    let (h, mut b) = wronski_quotient(&c, x)?;
    if flavour == Flavour::Dep {
        let table = lifted_core_join(&b);
        b = b.with_tensor(table)?;
    }
    let valuation = mu.into_iter().map(|(p, v)| (p, h.apply(v))).collect();
    Ok(Reduction { algebra: b, valuation })
}

/// A finite dependence algebra refuting `phi`, built from the values of the subformulas of the
/// disjunctive normal form.
///
/// `X` holds those values under a refuting valuation together with the top, `Y` closes `X` under
/// `&`, tensor and `0`,
/// and `Z` closes `Y` under `&` and `\/`. On `Z` implication is `x -> y = V{c in Z : c & x <= y}`
/// and tensor is lifted from `Y`. The core is `Y`.
pub fn dep_finite_refuter(a: &FiniteAlgebra, phi: &Formula) -> Result<Reduction, AlgebraError> {
    if !a.has_tensor() {
        return Err(AlgebraError::MissingTensor);
    }
    if !is_well_connected(a) {
        return Err(AlgebraError::NotWellConnected);
    }
    let mu = refuting_valuation(a, phi)?.ok_or(AlgebraError::PhiIsValid)?;
    let mut xs = vec![a.one()];
    for disjunct in dnf(phi) {
        for sub in disjunct.subformulas() {
            xs.push(eval_core(a, &mu, &sub)?);
        }
    }
    let y = a.closure(
        xs,
        Ops {
            meet: true,
            tensor: true,
            zero: true,
            ..Ops::default()
        },
    );
    let z = a.closure(
        members(&y),
        Ops {
            meet: true,
            join: true,
            ..Ops::default()
        },
    );
    let (mut b, old) = a.restrict_lattice(&z);
    let m = b.len();
    let ys: Vec<Elem> = (0..m).filter(|&i| y[old[i]]).collect();
    for x in 0..m {
        for v in 0..m {
            b.imp[x * m + v] = (0..m)
                .filter(|&c| b.leq(b.meet(c, x), v))
                .fold(b.zero, |acc, c| b.join(acc, c));
        }
    }
    let new_of = |o: Elem| old.iter().position(|&e| e == o).expect("Y closed under tensor");
    let mut table = vec![0; m * m];
    for x in 0..m {
        for v in 0..m {
            let mut acc = b.zero;
            for &c in ys.iter().filter(|&&c| b.leq(c, x)) {
                for &d in ys.iter().filter(|&&d| b.leq(d, v)) {
                    acc = b.join(acc, new_of(a.tensor(old[c], old[d]).expect("present")));
                }
            }
            table[x * m + v] = acc;
        }
    }
    b.core = (0..m).map(|i| y[old[i]]).collect();
    b.tensor = Some(table);
    let valuation = mu
        .into_iter()
        .map(|(p, v)| (p, if z[v] { new_of(v) } else { b.zero }))
        .collect();
    Ok(Reduction { algebra: b, valuation })
}

/// An order isomorphism between two algebras that also matches core flags (and tensor tables
/// when both have one), found by backtracking.
pub fn algebra_isomorphism(a: &FiniteAlgebra, b: &FiniteAlgebra) -> Option<Vec<Elem>> {
    if a.len() != b.len() || a.core().len() != b.core().len() || a.has_tensor() != b.has_tensor() {
        return None;
    }
    let n = a.len();
    let height = |alg: &FiniteAlgebra, x: Elem| alg.elems().filter(|&y| alg.leq(y, x)).count();
    let mut map = vec![usize::MAX; n];
    let mut used = vec![false; n];
    fn go(
        i: usize,
        a: &FiniteAlgebra,
        b: &FiniteAlgebra,
        map: &mut Vec<Elem>,
        used: &mut Vec<bool>,
        height: &dyn Fn(&FiniteAlgebra, Elem) -> usize,
    ) -> bool {
        let n = a.len();
        if i == n {
            return match (&a.tensor, &b.tensor) {
                (Some(_), Some(_)) => {
                    (0..n).all(|x| (0..n).all(|y| map[a.tensor(x, y).unwrap()] == b.tensor(map[x], map[y]).unwrap()))
                }
                _ => true,
            };
        }
        for j in 0..n {
            if used[j] || a.is_core(i) != b.is_core(j) || height(a, i) != height(b, j) {
                continue;
            }
            let consistent = (0..i).all(|k| a.leq(k, i) == b.leq(map[k], j) && a.leq(i, k) == b.leq(j, map[k]));
            if consistent {
                map[i] = j;
                used[j] = true;
                if go(i + 1, a, b, map, used, height) {
                    return true;
                }
                used[j] = false;
            }
        }
        false
    }
    go(0, a, b, &mut map, &mut used, &height).then_some(map)
}
