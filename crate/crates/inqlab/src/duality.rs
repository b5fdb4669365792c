//! Finite duality between frames and core-generated, well-connected algebras.
//!
//! A frame `F` goes to the algebra of nonempty downward-closed families of its
//! upsets, with the principal families `{t}↓` as core. An element is stored as a
//! bitmask over the indices of `Up(F)` and named by its maximal upsets.

use std::collections::{BTreeMap, HashMap};

use thiserror::Error;

use crate::algebra::{
    check_hom, eval_core, is_fcgw, AlgebraError, AlgebraHom, CoreValuation, Elem, FiniteAlgebra, Flavour, Violation,
};
use crate::formula::Formula;
use crate::team::{check_map, model_valid, Frame, FrameMap, MapRole, MapViolation, Model, Team, TeamError};

/// Upper bound on `|Up(F)|`; elements are bitmasks over upsets.
pub const MAX_UPSETS: usize = 64;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum DualityError {
    #[error("frame has {0} upsets; at most {MAX_UPSETS} are supported")]
    TooLarge(usize),
    #[error("a {role} map cannot be dualised in the {flavour} flavour")]
    MapRoleMismatch { role: MapRole, flavour: Flavour },
    #[error("invalid frame map: {0}")]
    InvalidMap(#[from] MapViolation),
    #[error("dual map is not a homomorphism: {0}")]
    NotAHom(Violation),
    #[error("the algebra is not finite, core-generated and well-connected")]
    NotFCGW,
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
    #[error(transparent)]
    Team(#[from] TeamError),
}

/// `Up(F)` ordered by inclusion; index 0 is the empty upset, the last is `W`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct UpsetLattice {
    pub upsets: Vec<Team>,
    index: HashMap<u64, usize>,
    /// Bitmask over upset indices of `{t}↓`.
    below: Vec<u64>,
}

impl UpsetLattice {
    pub fn new(f: &Frame) -> Result<UpsetLattice, DualityError> {
        let upsets = f.upsets();
        if upsets.len() > MAX_UPSETS {
            return Err(DualityError::TooLarge(upsets.len()));
        }
        let index = upsets.iter().enumerate().map(|(i, t)| (t.0, i)).collect();
        let below = upsets
            .iter()
            .map(|&t| {
                upsets
                    .iter()
                    .enumerate()
                    .filter(|(_, s)| s.is_subset(t))
                    .fold(0u64, |m, (j, _)| m | 1 << j)
            })
            .collect();
        Ok(UpsetLattice { upsets, index, below })
    }

    pub fn len(&self) -> usize {
        self.upsets.len()
    }

    pub fn is_empty(&self) -> bool {
        self.upsets.is_empty()
    }

    pub fn index_of(&self, t: Team) -> Option<usize> {
        self.index.get(&t.0).copied()
    }

    /// `{t}↓` as a bitmask over upset indices.
    pub fn principal(&self, t: Team) -> u64 {
        self.below[self.index_of(t).expect("an upset of this frame")]
    }

    /// The maximal upsets of a family, in index order.
    pub fn maximal(&self, family: u64) -> Vec<Team> {
        bits(family)
            .filter(|&i| bits(family).all(|j| j == i || !self.upsets[i].is_subset(self.upsets[j])))
            .map(|i| self.upsets[i])
            .collect()
    }

    /// All nonempty downward-closed families, sorted by size and then bitmask.
    pub fn downsets(&self) -> Vec<u64> {
        fn go(lat: &UpsetLattice, i: usize, cur: u64, out: &mut Vec<u64>) {
            if i == lat.len() {
                out.push(cur);
                return;
            }
            go(lat, i + 1, cur, out);
            let strictly_below = lat.below[i] & !(1 << i);
            if strictly_below & !cur == 0 {
                go(lat, i + 1, cur | 1 << i, out);
            }
        }
        let mut out = Vec::new();
        go(self, 1, 1, &mut out);
        out.sort_by_key(|&m| (m.count_ones(), m));
        out
    }
}

fn bits(mask: u64) -> impl Iterator<Item = usize> + Clone {
    (0..64).filter(move |&i| mask >> i & 1 == 1)
}

/// The upsets of a frame.
pub fn upsets(f: &Frame) -> Result<UpsetLattice, DualityError> {
    UpsetLattice::new(f)
}

/// `Dw⁺(Up(F))` together with its provenance.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DualAlgebra {
    pub algebra: FiniteAlgebra,
    pub frame: Frame,
    pub lattice: UpsetLattice,
    /// Each element as a family of upsets.
    pub families: Vec<u64>,
    element_of: HashMap<u64, Elem>,
}

impl DualAlgebra {
    pub fn element(&self, family: u64) -> Option<Elem> {
        self.element_of.get(&family).copied()
    }

    /// The core element `{t}↓`.
    pub fn principal(&self, t: Team) -> Elem {
        self.element(self.lattice.principal(t))
            .expect("principal families are elements")
    }

    /// The upset generating a core element.
    pub fn generator(&self, e: Elem) -> Option<Team> {
        match self.lattice.maximal(self.families[e])[..] {
            [t] => Some(t),
            _ => None,
        }
    }

    pub fn maximal_upsets(&self, e: Elem) -> Vec<Team> {
        self.lattice.maximal(self.families[e])
    }

    /// Whether the upset `t` belongs to the family `e`.
    pub fn contains_upset(&self, e: Elem, t: Team) -> bool {
        self.lattice.index_of(t).is_some_and(|i| self.families[e] >> i & 1 == 1)
    }

    /// Core element name mapped to the worlds of its generating upset.
    pub fn provenance(&self) -> BTreeMap<String, Vec<String>> {
        self.algebra
            .core()
            .into_iter()
            .map(|c| {
                let t = self.generator(c).expect("core elements are principal");
                (self.algebra.name(c).to_string(), self.frame.team_names(t))
            })
            .collect()
    }
}

fn upset_name(f: &Frame, t: Team) -> String {
    format!("{{{}}}", f.team_names(t).join(","))
}

/// The dual algebra of a frame; the dependence flavour adds `{t}↓ (*) {s}↓ = {t ∪ s}↓`, lifted.
pub fn dual_algebra(f: &Frame, flavour: Flavour) -> Result<DualAlgebra, DualityError> {
    let lat = UpsetLattice::new(f)?;
    let families = lat.downsets();
    let n = families.len();
    let element_of: HashMap<u64, Elem> = families.iter().enumerate().map(|(i, &m)| (m, i)).collect();
    let el = |m: u64| element_of[&m];
    let names = families
        .iter()
        .map(|&m| {
            let parts: Vec<String> = lat.maximal(m).into_iter().map(|t| upset_name(f, t)).collect();
            format!("[{}]", parts.join(","))
        })
        .collect();
    let mut leq = vec![false; n * n];
    let mut meet = vec![0; n * n];
    let mut join = vec![0; n * n];
    let mut imp = vec![0; n * n];
    for (x, &mx) in families.iter().enumerate() {
        for (y, &my) in families.iter().enumerate() {
            leq[x * n + y] = mx & !my == 0;
            meet[x * n + y] = el(mx & my);
            join[x * n + y] = el(mx | my);
            let arrow = (0..lat.len())
                .filter(|&i| lat.below[i] & mx & !my == 0)
                .fold(0u64, |m, i| m | 1 << i);
            imp[x * n + y] = el(arrow);
        }
    }
    let core = families.iter().map(|&m| lat.maximal(m).len() == 1).collect();
    let tensor = (flavour == Flavour::Dep).then(|| {
        let mut table = vec![0; n * n];
        for (x, &mx) in families.iter().enumerate() {
            for (y, &my) in families.iter().enumerate() {
                let mut m = 0u64;
                for i in bits(mx) {
                    for j in bits(my) {
                        m |= lat.principal(lat.upsets[i].union(lat.upsets[j]));
                    }
                }
                table[x * n + y] = el(m);
            }
        }
        table
    });
    let algebra = FiniteAlgebra::from_parts(names, leq, meet, join, imp, 0, n - 1, core, tensor);
    Ok(DualAlgebra {
        algebra,
        frame: f.clone(),
        lattice: lat,
        families,
        element_of,
    })
}

/// The dual of a frame map, from the dual algebra of its target to that of its source.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DualMap {
    pub domain: DualAlgebra,
    pub codomain: DualAlgebra,
    pub hom: AlgebraHom,
}

/// `{t}↓ ↦ {R[p⁻¹[t]]}↓` for Köhler maps, `{t}↓ ↦ {p⁻¹[t]}↓` for p-morphisms, extended by unions.
///
/// Duals of total maps are checked to be homomorphisms; duals of partial maps only to preserve
/// `0`, joins and the core.
pub fn dual_map(p: &FrameMap, flavour: Flavour) -> Result<DualMap, DualityError> {
    if flavour == Flavour::Dep && p.role != MapRole::PMorphism {
        return Err(DualityError::MapRoleMismatch { role: p.role, flavour });
    }
    check_map(p)?;
    let domain = dual_algebra(&p.target, flavour)?;
    let codomain = dual_algebra(&p.source, flavour)?;
    let pull = |t: Team| -> Team {
        let pre = Team::from_worlds((0..p.source.size()).filter(|&x| p.map[x].is_some_and(|y| t.contains(y))));
        p.source.r_image(pre).expect("preimage lies in the source")
    };
    let map = domain
        .families
        .iter()
        .map(|&m| {
            let family = domain
                .lattice
                .maximal(m)
                .into_iter()
                .fold(0u64, |acc, t| acc | codomain.lattice.principal(pull(t)));
            codomain
                .element(family)
                .expect("unions of principal families are elements")
        })
        .collect();
    let hom = AlgebraHom { map, flavour };
    if p.is_total() {
        check_hom(&domain.algebra, &codomain.algebra, &hom).map_err(DualityError::NotAHom)?;
    } else {
        check_join_hom(&domain.algebra, &codomain.algebra, &hom).map_err(DualityError::NotAHom)?;
    }
    Ok(DualMap { domain, codomain, hom })
}

/// Preservation of `0`, `\/` and the core only. The dual of a partial map may send the top below
/// the top, so implication is not checked.
pub fn check_join_hom(src: &FiniteAlgebra, dst: &FiniteAlgebra, h: &AlgebraHom) -> Result<(), Violation> {
    let bad = |law: &'static str, detail: String| Err(Violation { law, detail });
    if h.apply(src.zero()) != dst.zero() {
        return bad("hom-zero", format!("h(0) = {}", dst.name(h.apply(src.zero()))));
    }
    for x in src.elems() {
        if src.is_core(x) && !dst.is_core(h.apply(x)) {
            return bad("hom-core", src.name(x).to_string());
        }
        for y in src.elems() {
            if h.apply(src.join(x, y)) != dst.join(h.apply(x), h.apply(y)) {
                return bad("hom-commutes", format!("{} \\/ {}", src.name(x), src.name(y)));
            }
        }
    }
    Ok(())
}

/// Least upper bound of two core elements within the core.
fn core_join(a: &FiniteAlgebra, core: &[Elem], x: Elem, y: Elem) -> Elem {
    core.iter()
        .copied()
        .filter(|&c| a.leq(x, c) && a.leq(y, c))
        .fold(a.one(), |acc, c| a.meet(acc, c))
}

/// The frame of nonzero join-irreducible elements of the core lattice, with the order reversed.
///
/// Also returns the core element behind each world.
pub fn algebra_to_frame(a: &FiniteAlgebra) -> Result<(Frame, Vec<Elem>), DualityError> {
    if !is_fcgw(a) {
        return Err(DualityError::NotFCGW);
    }
    let core = a.core();
    let points: Vec<Elem> = core
        .iter()
        .copied()
        .filter(|&c| c != a.zero())
        .filter(|&c| {
            let below = core
                .iter()
                .copied()
                .filter(|&d| a.lt(d, c))
                .fold(a.zero(), |acc, d| core_join(a, &core, acc, d));
            below != c
        })
        .collect();
    if points.len() > crate::team::MAX_WORLDS {
        return Err(DualityError::Team(TeamError::TooManyWorlds(points.len())));
    }
    let names = (1..=points.len()).map(|i| format!("w{i}")).collect();
    let mut pairs = Vec::new();
    for (w, &pw) in points.iter().enumerate() {
        for (v, &pv) in points.iter().enumerate() {
            if a.leq(pv, pw) {
                pairs.push((w, v));
            }
        }
    }
    Ok((Frame::poset(names, &pairs)?, points))
}

/// Why a round trip failed to produce an isomorphism.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum RoundTripFailure {
    #[error(transparent)]
    Duality(#[from] DualityError),
    #[error("sizes differ: {0} vs {1}")]
    Size(usize, usize),
    #[error("candidate map is not a bijection")]
    NotBijective,
    #[error("candidate map does not preserve and reflect the order at {0} and {1}")]
    Order(String, String),
    #[error("candidate map does not respect the core at {0}")]
    Core(String),
    #[error("candidate map does not respect the tensor at {0} and {1}")]
    Tensor(String, String),
}

/// `G(F(P)) ≅ P`: world `w` goes to the point of the dual frame behind `{R[w]}↓`.
pub fn round_trip_check(f: &Frame, flavour: Flavour) -> Result<Vec<usize>, RoundTripFailure> {
    let d = dual_algebra(f, flavour)?;
    let (g, points) = algebra_to_frame(&d.algebra)?;
    if g.size() != f.size() {
        return Err(RoundTripFailure::Size(f.size(), g.size()));
    }
    let mut iso = Vec::with_capacity(f.size());
    for w in 0..f.size() {
        let e = d.principal(f.succ(w));
        iso.push(
            points
                .iter()
                .position(|&p| p == e)
                .ok_or(RoundTripFailure::NotBijective)?,
        );
    }
    let mut hit = vec![false; g.size()];
    for &v in &iso {
        if std::mem::replace(&mut hit[v], true) {
            return Err(RoundTripFailure::NotBijective);
        }
    }
    for w in 0..f.size() {
        for v in 0..f.size() {
            if f.r(w, v) != g.r(iso[w], iso[v]) {
                return Err(RoundTripFailure::Order(f.name(w).into(), f.name(v).into()));
            }
        }
    }
    Ok(iso)
}

/// `F(G(A)) ≅ A`: a core element `c` goes to `{ {w : pts[w] <= c} }↓`, and every element to the
/// union over its disjunctive representation.
pub fn round_trip_check_alg(a: &FiniteAlgebra) -> Result<Vec<Elem>, RoundTripFailure> {
    let (g, points) = algebra_to_frame(a)?;
    let d = dual_algebra(&g, a.flavour())?;
    let b = &d.algebra;
    if a.len() != b.len() {
        return Err(RoundTripFailure::Size(a.len(), b.len()));
    }
    let upset_of = |c: Elem| Team::from_worlds((0..points.len()).filter(|&w| a.leq(points[w], c)));
    let mut iso = Vec::with_capacity(a.len());
    for x in a.elems() {
        let rep = crate::algebra::disjunctive_rep(a, x).map_err(DualityError::from)?;
        let family = rep.into_iter().fold(0u64, |m, c| m | d.lattice.principal(upset_of(c)));
        iso.push(d.element(family).ok_or(RoundTripFailure::NotBijective)?);
    }
    let mut hit = vec![false; b.len()];
    for &y in &iso {
        if std::mem::replace(&mut hit[y], true) {
            return Err(RoundTripFailure::NotBijective);
        }
    }
    for x in a.elems() {
        if a.is_core(x) != b.is_core(iso[x]) {
            return Err(RoundTripFailure::Core(a.name(x).into()));
        }
        for y in a.elems() {
            if a.leq(x, y) != b.leq(iso[x], iso[y]) {
                return Err(RoundTripFailure::Order(a.name(x).into(), a.name(y).into()));
            }
            if let (Some(t), Some(u)) = (a.tensor(x, y), b.tensor(iso[x], iso[y])) {
                if iso[t] != u {
                    return Err(RoundTripFailure::Tensor(a.name(x).into(), a.name(y).into()));
                }
            }
        }
    }
    Ok(iso)
}

/// The dual algebra of the model's frame and `μ(p) = {V⁻¹(p)}↓`.
pub fn canonical_core_valuation(m: &Model, flavour: Flavour) -> Result<(DualAlgebra, CoreValuation), DualityError> {
    let d = dual_algebra(m.frame(), flavour)?;
    let mu = m.atoms().map(|p| (p.to_string(), d.principal(m.truth(p)))).collect();
    Ok((d, mu))
}

/// The model on `algebra_to_frame(A)` with `p` true at `w` iff the point of `w` lies below `μ(p)`.
pub fn canonical_frame_valuation(a: &FiniteAlgebra, mu: &CoreValuation) -> Result<Model, DualityError> {
    let (g, points) = algebra_to_frame(a)?;
    let mut truth = BTreeMap::new();
    for (p, &v) in mu {
        if !a.is_core(v) {
            return Err(AlgebraError::NotCore(a.name(v).to_string()).into());
        }
        truth.insert(
            p.clone(),
            Team::from_worlds((0..points.len()).filter(|&w| a.leq(points[w], v))),
        );
    }
    Ok(Model::new(g, truth)?)
}

/// Team and algebraic verdicts on the same model.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct CrossCheck {
    pub team: bool,
    pub algebra: bool,
}

impl CrossCheck {
    pub fn agrees(&self) -> bool {
        self.team == self.algebra
    }
}

/// `M ⊨ φ` by team semantics against `⟦φ⟧ = 1` in the dual algebraic model.
pub fn cross_check(m: &Model, phi: &Formula, flavour: Flavour) -> Result<CrossCheck, DualityError> {
    let (d, mut mu) = canonical_core_valuation(m, flavour)?;
    for p in phi.atoms() {
        mu.entry(p).or_insert(d.algebra.zero());
    }
    let value = eval_core(&d.algebra, &mu, phi)?;
    Ok(CrossCheck {
        team: model_valid(m, phi),
        algebra: value == d.algebra.one(),
    })
}

/// The upsets of the model's frame lying in `⟦φ⟧` of its dual model.
pub fn dual_truth_set(m: &Model, phi: &Formula, flavour: Flavour) -> Result<Vec<Team>, DualityError> {
    let (d, mut mu) = canonical_core_valuation(m, flavour)?;
    for p in phi.atoms() {
        mu.entry(p).or_insert(d.algebra.zero());
    }
    let value = eval_core(&d.algebra, &mu, phi)?;
    Ok(d.lattice
        .upsets
        .iter()
        .copied()
        .filter(|&t| d.contains_upset(value, t))
        .collect())
}
