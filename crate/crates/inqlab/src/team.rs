//! Finite intuitionistic Kripke frames and models under team semantics.

use std::collections::{BTreeMap, BTreeSet, HashMap, HashSet};
use std::fmt;

use rayon::prelude::*;
use thiserror::Error;

use crate::formula::{is_atom_name, Dag, Formula, Node};

/// Teams are bitmasks over world indices, so frames hold at most this many worlds.
pub const MAX_WORLDS: usize = 64;

/// A set of worlds.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Team(pub u64);

impl Team {
    pub const EMPTY: Team = Team(0);

    pub fn full(n: usize) -> Team {
        Team(if n >= 64 { u64::MAX } else { (1u64 << n) - 1 })
    }

    pub fn singleton(w: usize) -> Team {
        Team(1 << w)
    }

    pub fn from_worlds(ws: impl IntoIterator<Item = usize>) -> Team {
        Team(ws.into_iter().fold(0, |m, w| m | (1 << w)))
    }

    pub fn contains(self, w: usize) -> bool {
        w < 64 && self.0 >> w & 1 == 1
    }

    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    pub fn len(self) -> usize {
        self.0.count_ones() as usize
    }

    pub fn is_subset(self, other: Team) -> bool {
        self.0 & !other.0 == 0
    }

    pub fn union(self, other: Team) -> Team {
        Team(self.0 | other.0)
    }

    pub fn intersection(self, other: Team) -> Team {
        Team(self.0 & other.0)
    }

    pub fn minus(self, other: Team) -> Team {
        Team(self.0 & !other.0)
    }

    pub fn worlds(self) -> impl Iterator<Item = usize> {
        let mut m = self.0;
        std::iter::from_fn(move || {
            if m == 0 {
                return None;
            }
            let w = m.trailing_zeros() as usize;
            m &= m - 1;
            Some(w)
        })
    }

    /// All subsets, from `self` down to the empty team.
    pub fn subsets(self) -> impl Iterator<Item = Team> {
        let full = self.0;
        let mut next = Some(full);
        std::iter::from_fn(move || {
            let cur = next?;
            next = if cur == 0 { None } else { Some((cur - 1) & full) };
            Some(Team(cur))
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TeamError {
    #[error("world index {0} is not in the frame")]
    ForeignWorld(usize),
    #[error("unknown world {0:?}")]
    UnknownWorld(String),
    #[error("duplicate world {0:?}")]
    DuplicateWorld(String),
    #[error("valuation is not persistent: {atom} holds at {from} but not at {to}")]
    NotPersistent { atom: String, from: String, to: String },
    #[error("illegal atom name {0:?}")]
    IllegalAtom(String),
    #[error("frame has {0} worlds; at most {MAX_WORLDS} are supported")]
    TooManyWorlds(usize),
    #[error("{0}")]
    Frame(#[from] FrameViolation),
}

/// The first law a candidate accessibility relation breaks.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FrameViolation {
    #[error("reflexivity fails at {world}")]
    Reflexivity { world: String },
    #[error("antisymmetry fails for {a} and {b}")]
    Antisymmetry { a: String, b: String },
    #[error("transitivity fails for {a} R {b} R {c}")]
    Transitivity { a: String, b: String, c: String },
}

/// A finite set of named worlds with a binary relation.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Frame {
    names: Vec<String>,
    succ: Vec<Team>,
}

fn default_names(n: usize) -> Vec<String> {
    (1..=n).map(|i| format!("w{i}")).collect()
}

impl Frame {
    /// The relation exactly as given, without closure or validation.
    pub fn from_relation(names: Vec<String>, pairs: &[(usize, usize)]) -> Result<Frame, TeamError> {
        let n = names.len();
        if n > MAX_WORLDS {
            return Err(TeamError::TooManyWorlds(n));
        }
        let mut seen = HashSet::new();
        if let Some(dup) = names.iter().find(|w| !seen.insert(*w)) {
            return Err(TeamError::DuplicateWorld(dup.clone()));
        }
        let mut succ = vec![Team::EMPTY; n];
        for &(a, b) in pairs {
            if a >= n || b >= n {
                return Err(TeamError::ForeignWorld(a.max(b)));
            }
            succ[a].0 |= 1 << b;
        }
        Ok(Frame { names, succ })
    }

    /// Reflexive-transitive closure of `pairs`, rejected unless antisymmetric.
    pub fn poset(names: Vec<String>, pairs: &[(usize, usize)]) -> Result<Frame, TeamError> {
        let mut f = Frame::from_relation(names, pairs)?;
        let n = f.size();
        for w in 0..n {
            f.succ[w].0 |= 1 << w;
        }
        for k in 0..n {
            for i in 0..n {
                if f.succ[i].contains(k) {
                    f.succ[i] = f.succ[i].union(f.succ[k]);
                }
            }
        }
        validate_frame(&f)?;
        Ok(f)
    }

    /// Worlds `w1..wn` with `wi R wj` for `i <= j`.
    pub fn chain(n: usize) -> Frame {
        let pairs: Vec<_> = (1..n).map(|i| (i - 1, i)).collect();
        Frame::poset(default_names(n), &pairs).expect("chains are posets")
    }

    /// `n` pairwise unrelated worlds.
    pub fn discrete(n: usize) -> Frame {
        Frame::poset(default_names(n), &[]).expect("antichains are posets")
    }

    /// Frame given by successor sets over worlds `w1..wn`; the caller guarantees a partial order.
    pub(crate) fn from_succ(succ: Vec<Team>) -> Frame {
        Frame {
            names: default_names(succ.len()),
            succ,
        }
    }

    pub fn size(&self) -> usize {
        self.names.len()
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn name(&self, w: usize) -> &str {
        &self.names[w]
    }

    pub fn world(&self, name: &str) -> Option<usize> {
        self.names.iter().position(|n| n == name)
    }

    pub fn with_names(mut self, names: Vec<String>) -> Frame {
        assert_eq!(names.len(), self.size());
        self.names = names;
        self
    }

    pub fn r(&self, w: usize, v: usize) -> bool {
        self.succ[w].contains(v)
    }

    /// `R[w]`.
    pub fn succ(&self, w: usize) -> Team {
        self.succ[w]
    }

    /// `{v : v R w}`.
    pub fn pred(&self, w: usize) -> Team {
        Team::from_worlds((0..self.size()).filter(|&v| self.r(v, w)))
    }

    pub fn full_team(&self) -> Team {
        Team::full(self.size())
    }

    pub fn contains_team(&self, t: Team) -> bool {
        t.is_subset(self.full_team())
    }

    fn image(&self, t: Team) -> Team {
        t.worlds().fold(Team::EMPTY, |acc, w| acc.union(self.succ[w]))
    }

    /// `R[t]`.
    pub fn r_image(&self, t: Team) -> Result<Team, TeamError> {
        self.check_team(t)?;
        Ok(self.image(t))
    }

    pub fn check_team(&self, t: Team) -> Result<(), TeamError> {
        match t.minus(self.full_team()).worlds().next() {
            Some(w) => Err(TeamError::ForeignWorld(w)),
            None => Ok(()),
        }
    }

    pub fn is_upset(&self, t: Team) -> bool {
        self.image(t) == t
    }

    pub fn is_discrete(&self) -> bool {
        (0..self.size()).all(|w| self.succ[w] == Team::singleton(w))
    }

    /// All R-upsets, ordered by cardinality and then by bitmask.
    pub fn upsets(&self) -> Vec<Team> {
        let mut out: Vec<Team> = self.full_team().subsets().filter(|&t| self.is_upset(t)).collect();
        out.sort_by_key(|t| (t.len(), t.0));
        out
    }

    pub fn team_names(&self, t: Team) -> Vec<String> {
        t.worlds().map(|w| self.names[w].clone()).collect()
    }

    pub fn parse_team(&self, text: &str) -> Result<Team, TeamError> {
        let mut t = Team::EMPTY;
        for part in text.split(',').map(str::trim).filter(|s| !s.is_empty()) {
            let w = self
                .world(part)
                .ok_or_else(|| TeamError::UnknownWorld(part.to_string()))?;
            t.0 |= 1 << w;
        }
        Ok(t)
    }

    /// Strict Hasse covers `(a, b)` with `a R b`.
    pub fn covers(&self) -> Vec<(usize, usize)> {
        let n = self.size();
        let mut out = Vec::new();
        for a in 0..n {
            for b in self.succ[a].worlds().filter(|&b| b != a) {
                let between = (0..n).any(|c| c != a && c != b && self.r(a, c) && self.r(c, b));
                if !between {
                    out.push((a, b));
                }
            }
        }
        out
    }

    /// The subframe on `t`, with the embedding of new indices into old ones.
    pub fn restrict(&self, t: Team) -> (Frame, Vec<usize>) {
        let keep: Vec<usize> = t.worlds().collect();
        let succ = keep
            .iter()
            .map(|&w| Team::from_worlds((0..keep.len()).filter(|&j| self.r(w, keep[j]))))
            .collect();
        let names = keep.iter().map(|&w| self.names[w].clone()).collect();
        (Frame { names, succ }, keep)
    }

    /// Relabel so that new world `k` is old world `perm[k]`.
    pub fn permute(&self, perm: &[usize]) -> Frame {
        let n = self.size();
        let mut inv = vec![0; n];
        for (k, &old) in perm.iter().enumerate() {
            inv[old] = k;
        }
        let succ = perm
            .iter()
            .map(|&old| Team::from_worlds(self.succ[old].worlds().map(|v| inv[v])))
            .collect();
        let names = perm.iter().map(|&old| self.names[old].clone()).collect();
        Frame { names, succ }
    }

    /// Predecessor sets row by row; the canonical code is the least of these over all relabellings.
    fn down_code(&self, perm: &[usize]) -> Vec<u64> {
        let n = self.size();
        let mut inv = vec![0; n];
        for (k, &old) in perm.iter().enumerate() {
            inv[old] = k;
        }
        perm.iter()
            .map(|&old| (0..n).filter(|&v| self.r(v, old)).fold(0u64, |m, v| m | 1 << inv[v]))
            .collect()
    }

    /// Lexicographically least adjacency encoding and a relabelling attaining it.
    pub fn canonical(&self) -> (Vec<u64>, Vec<usize>) {
        let mut best: Option<(Vec<u64>, Vec<usize>)> = None;
        for_each_permutation(self.size(), &mut |perm| {
            let code = self.down_code(perm);
            if best.as_ref().map_or(true, |(b, _)| code < *b) {
                best = Some((code, perm.to_vec()));
            }
        });
        best.expect("at least the identity")
    }

    pub fn canonical_code(&self) -> Vec<u64> {
        self.canonical().0
    }

    /// The canonically relabelled copy, with worlds renamed `w1..wn`.
    pub fn canonical_form(&self) -> Frame {
        let (_, perm) = self.canonical();
        self.permute(&perm).with_names(default_names(self.size()))
    }
}

pub(crate) fn for_each_permutation(n: usize, f: &mut dyn FnMut(&[usize])) {
    fn go(prefix: &mut Vec<usize>, used: &mut Vec<bool>, f: &mut dyn FnMut(&[usize])) {
        if prefix.len() == used.len() {
            f(prefix);
            return;
        }
        for i in 0..used.len() {
            if !used[i] {
                used[i] = true;
                prefix.push(i);
                go(prefix, used, f);
                prefix.pop();
                used[i] = false;
            }
        }
    }
    go(&mut Vec::with_capacity(n), &mut vec![false; n], f);
}

/// Check that the relation is a partial order, naming the first failure.
pub fn validate_frame(f: &Frame) -> Result<(), FrameViolation> {
    let n = f.size();
    let name = |w: usize| f.names[w].clone();
    for w in 0..n {
        if !f.r(w, w) {
            return Err(FrameViolation::Reflexivity { world: name(w) });
        }
    }
    for a in 0..n {
        for b in a + 1..n {
            if f.r(a, b) && f.r(b, a) {
                return Err(FrameViolation::Antisymmetry { a: name(a), b: name(b) });
            }
        }
    }
    for a in 0..n {
        for b in f.succ[a].worlds() {
            if let Some(c) = f.succ[b].minus(f.succ[a]).worlds().next() {
                return Err(FrameViolation::Transitivity {
                    a: name(a),
                    b: name(b),
                    c: name(c),
                });
            }
        }
    }
    Ok(())
}

/// `R[t]`.
pub fn r_image(f: &Frame, t: Team) -> Result<Team, TeamError> {
    f.r_image(t)
}

// ---------------------------------------------------------------------------
// Models

/// A frame with a persistent valuation, stored as the truth set of each atom.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Model {
    frame: Frame,
    truth: BTreeMap<String, Team>,
}

impl Model {
    pub fn new(frame: Frame, truth: BTreeMap<String, Team>) -> Result<Model, TeamError> {
        for (atom, &t) in &truth {
            if !is_atom_name(atom) {
                return Err(TeamError::IllegalAtom(atom.clone()));
            }
            frame.check_team(t)?;
            for w in t.worlds() {
                if let Some(v) = frame.succ(w).minus(t).worlds().next() {
                    return Err(TeamError::NotPersistent {
                        atom: atom.clone(),
                        from: frame.name(w).to_string(),
                        to: frame.name(v).to_string(),
                    });
                }
            }
        }
        Ok(Model { frame, truth })
    }

    /// Build from the set of atoms true at each world.
    pub fn from_worlds(frame: Frame, at: &[BTreeSet<String>]) -> Result<Model, TeamError> {
        let mut truth: BTreeMap<String, Team> = BTreeMap::new();
        for (w, atoms) in at.iter().enumerate() {
            if w >= frame.size() {
                return Err(TeamError::ForeignWorld(w));
            }
            for a in atoms {
                truth.entry(a.clone()).or_default().0 |= 1 << w;
            }
        }
        Model::new(frame, truth)
    }

    pub fn frame(&self) -> &Frame {
        &self.frame
    }

    /// Atoms mentioned by the valuation, including those true nowhere.
    pub fn atoms(&self) -> impl Iterator<Item = &str> {
        self.truth.keys().map(String::as_str)
    }

    /// `V^{-1}(p)`; empty for atoms the valuation does not mention.
    pub fn truth(&self, atom: &str) -> Team {
        self.truth.get(atom).copied().unwrap_or_default()
    }

    pub fn truth_sets(&self) -> &BTreeMap<String, Team> {
        &self.truth
    }

    /// `V(w)`.
    pub fn valuation_at(&self, w: usize) -> BTreeSet<String> {
        self.truth
            .iter()
            .filter(|(_, t)| t.contains(w))
            .map(|(a, _)| a.clone())
            .collect()
    }

    /// The submodel on `t`, with the embedding of new indices into old ones.
    pub fn restrict(&self, t: Team) -> (Model, Vec<usize>) {
        let (frame, keep) = self.frame.restrict(t);
        let truth = self
            .truth
            .iter()
            .map(|(a, s)| {
                let sub = Team::from_worlds((0..keep.len()).filter(|&j| s.contains(keep[j])));
                (a.clone(), sub)
            })
            .collect();
        (Model { frame, truth }, keep)
    }
}

// ---------------------------------------------------------------------------
// Evaluation

/// Support checker for one formula on one model, memoised on (subformula, team).
pub struct TeamEvaluator<'m> {
    model: &'m Model,
    dag: Dag,
    truth: Vec<Team>,
    memo: HashMap<(usize, u64), bool>,
}

impl<'m> TeamEvaluator<'m> {
    pub fn new(model: &'m Model, phi: &Formula) -> Self {
        let dag = Dag::new(phi);
        let truth = dag.atoms.iter().map(|a| model.truth(a)).collect();
        TeamEvaluator {
            model,
            dag,
            truth,
            memo: HashMap::new(),
        }
    }

    pub fn supports(&mut self, t: Team) -> Result<bool, TeamError> {
        self.model.frame.check_team(t)?;
        Ok(self.node(self.dag.root, t))
    }

    fn node(&mut self, id: usize, t: Team) -> bool {
        if let Some(&v) = self.memo.get(&(id, t.0)) {
            return v;
        }
        let v = match self.dag.nodes[id] {
            Node::Atom(a) => t.is_subset(self.truth[a]),
            Node::Bot => t.is_empty(),
            Node::And(l, r) => self.node(l, t) && self.node(r, t),
            Node::Or(l, r) => self.node(l, t) || self.node(r, t),
            Node::Impl(l, r) => {
                let ext = self.model.frame.image(t);
                ext.subsets().all(|s| !self.node(l, s) || self.node(r, s))
            }
            Node::Tensor(l, r) => t.subsets().any(|s| {
                // s ∪ r = t forces t∖s ⊆ r ⊆ t
                self.node(l, s) && s.subsets().any(|x| self.node(r, t.minus(s).union(x)))
            }),
        };
        self.memo.insert((id, t.0), v);
        v
    }

    /// The largest team not supporting the formula, scanning from the full team down.
    pub fn first_failure(&mut self) -> Option<Team> {
        let root = self.dag.root;
        self.model.frame.full_team().subsets().find(|&t| !self.node(root, t))
    }
}

pub fn eval_team(m: &Model, t: Team, phi: &Formula) -> Result<bool, TeamError> {
    TeamEvaluator::new(m, phi).supports(t)
}

/// Support by every team of the model.
pub fn model_valid(m: &Model, phi: &Formula) -> bool {
    TeamEvaluator::new(m, phi).first_failure().is_none()
}

/// Validity under every persistent valuation of the atoms of `phi`.
pub fn frame_valid(f: &Frame, phi: &Formula) -> bool {
    let atoms: Vec<String> = phi.atoms().into_iter().collect();
    Valuations::new(f, &atoms).all(|m| model_valid(&m, phi))
}

/// All persistent valuations of `atoms` on a frame, in mixed-radix order over the upsets.
pub struct Valuations {
    frame: Frame,
    atoms: Vec<String>,
    upsets: Vec<Team>,
    next: usize,
    total: usize,
}

impl Valuations {
    pub fn new(frame: &Frame, atoms: &[String]) -> Valuations {
        let upsets = frame.upsets();
        let total = (0..atoms.len()).fold(1usize, |acc, _| acc.saturating_mul(upsets.len()));
        Valuations {
            frame: frame.clone(),
            atoms: atoms.to_vec(),
            upsets,
            next: 0,
            total,
        }
    }

    pub fn total(&self) -> usize {
        self.total
    }

    /// The `i`-th valuation; the first atom varies slowest.
    pub fn get(&self, mut i: usize) -> Model {
        let k = self.upsets.len();
        let mut truth = BTreeMap::new();
        for a in self.atoms.iter().rev() {
            truth.insert(a.clone(), self.upsets[i % k]);
            i /= k;
        }
        Model {
            frame: self.frame.clone(),
            truth,
        }
    }
}

impl Iterator for Valuations {
    type Item = Model;

    fn next(&mut self) -> Option<Model> {
        if self.next >= self.total {
            return None;
        }
        self.next += 1;
        Some(self.get(self.next - 1))
    }
}

/// True iff support by a team coincides with support by each of its singletons, on every team.
pub fn flatness_check(m: &Model, phi: &Formula) -> bool {
    let mut ev = TeamEvaluator::new(m, phi);
    let root = ev.dag.root;
    let single: Vec<bool> = (0..m.frame.size()).map(|w| ev.node(root, Team::singleton(w))).collect();
    m.frame
        .full_team()
        .subsets()
        .all(|t| ev.node(root, t) == t.worlds().all(|w| single[w]))
}

// ---------------------------------------------------------------------------
// Enumeration

/// All partial orders on exactly `n` labelled worlds, or one canonical representative per
/// isomorphism class when `dedup` is set.
pub fn frames_with_worlds(n: usize, dedup: bool) -> Vec<Frame> {
    let pairs: Vec<(usize, usize)> = (0..n).flat_map(|i| (i + 1..n).map(move |j| (i, j))).collect();
    let mut out = Vec::new();
    let mut state = vec![0u8; pairs.len()];
    loop {
        let mut succ: Vec<Team> = (0..n).map(Team::singleton).collect();
        for (&(i, j), &s) in pairs.iter().zip(&state) {
            match s {
                1 => succ[i].0 |= 1 << j,
                2 => succ[j].0 |= 1 << i,
                _ => {}
            }
        }
        let transitive = (0..n).all(|a| succ[a].worlds().all(|b| succ[b].is_subset(succ[a])));
        if transitive {
            out.push(Frame::from_succ(succ));
        }
        let mut k = pairs.len();
        loop {
            if k == 0 {
                return if dedup { dedup_isomorphic(out) } else { out };
            }
            k -= 1;
            state[k] += 1;
            if state[k] < 3 {
                break;
            }
            state[k] = 0;
        }
    }
}

/// Canonical representatives, in order of first appearance.
pub fn dedup_isomorphic(frames: Vec<Frame>) -> Vec<Frame> {
    let mut seen = HashSet::new();
    frames
        .into_iter()
        .filter(|f| seen.insert(f.canonical_code()))
        .map(|f| f.canonical_form())
        .collect()
}

/// Frames with 1 to `max` worlds.
pub fn enumerate_frames(max: usize, dedup: bool) -> Vec<Frame> {
    (1..=max).flat_map(|n| frames_with_worlds(n, dedup)).collect()
}

/// Discrete frames with 1 to `max` worlds.
pub fn discrete_frames(max: usize) -> Vec<Frame> {
    (1..=max).map(Frame::discrete).collect()
}

#[derive(Clone, Debug)]
pub struct SearchOptions {
    pub max_worlds: usize,
    pub classical: bool,
    pub dedup_iso: bool,
    /// Worker cap; `None` uses the ambient rayon pool.
    pub jobs: Option<usize>,
    /// First hit in enumeration order rather than any hit.
    pub deterministic: bool,
}

impl SearchOptions {
    pub fn new(max_worlds: usize) -> Self {
        SearchOptions {
            max_worlds,
            classical: false,
            dedup_iso: true,
            jobs: None,
            deterministic: true,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SearchOutcome {
    Countermodel {
        model: Model,
        team: Team,
    },
    /// No candidate up to this many worlds refutes the formula.
    ValidUpTo(usize),
}

impl SearchOutcome {
    pub fn countermodel(&self) -> Option<(&Model, Team)> {
        match self {
            SearchOutcome::Countermodel { model, team } => Some((model, *team)),
            SearchOutcome::ValidUpTo(_) => None,
        }
    }
}

/// Search frames of growing size for a model and team refuting `phi`.
pub fn countermodel_search(phi: &Formula, opts: &SearchOptions) -> SearchOutcome {
    let run = || search(phi, opts);
    match opts.jobs {
        Some(n) => rayon::ThreadPoolBuilder::new()
            .num_threads(n.max(1))
            .build()
            .map(|pool| pool.install(run))
            .unwrap_or_else(|_| search(phi, opts)),
        None => run(),
    }
}

fn search(phi: &Formula, opts: &SearchOptions) -> SearchOutcome {
    let atoms: Vec<String> = phi.atoms().into_iter().collect();
    for n in 1..=opts.max_worlds {
        let frames = if opts.classical {
            vec![Frame::discrete(n)]
        } else {
            frames_with_worlds(n, opts.dedup_iso)
        };
        for frame in &frames {
            let vals = Valuations::new(frame, &atoms);
            let refutes = |i: usize| {
                let m = vals.get(i);
                TeamEvaluator::new(&m, phi).first_failure().map(|t| (m, t))
            };
            let hit = if vals.total() < 32 {
                (0..vals.total()).find_map(refutes)
            } else if opts.deterministic {
                (0..vals.total()).into_par_iter().find_map_first(refutes)
            } else {
                (0..vals.total()).into_par_iter().find_map_any(refutes)
            };
            if let Some((model, team)) = hit {
                return SearchOutcome::Countermodel { model, team };
            }
        }
    }
    SearchOutcome::ValidUpTo(opts.max_worlds)
}

// ---------------------------------------------------------------------------
// Structure maps

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum MapRole {
    PMorphism,
    Kohler,
}

impl fmt::Display for MapRole {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            MapRole::PMorphism => "pmorphism",
            MapRole::Kohler => "kohler",
        })
    }
}

/// A possibly partial map between the worlds of two frames.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FrameMap {
    pub source: Frame,
    pub target: Frame,
    pub map: Vec<Option<usize>>,
    pub role: MapRole,
}

impl FrameMap {
    pub fn identity(f: &Frame, role: MapRole) -> FrameMap {
        FrameMap {
            source: f.clone(),
            target: f.clone(),
            map: (0..f.size()).map(Some).collect(),
            role,
        }
    }

    pub fn empty(source: &Frame, target: &Frame) -> FrameMap {
        FrameMap {
            source: source.clone(),
            target: target.clone(),
            map: vec![None; source.size()],
            role: MapRole::Kohler,
        }
    }

    pub fn is_total(&self) -> bool {
        self.map.iter().all(Option::is_some)
    }

    /// `self ∘ inner`, i.e. apply `inner` first.
    pub fn compose(&self, inner: &FrameMap) -> FrameMap {
        assert_eq!(inner.target, self.source, "maps are not composable");
        let map = inner.map.iter().map(|x| x.and_then(|y| self.map[y])).collect();
        let role = if self.role == MapRole::PMorphism && inner.role == MapRole::PMorphism {
            MapRole::PMorphism
        } else {
            MapRole::Kohler
        };
        FrameMap {
            source: inner.source.clone(),
            target: self.target.clone(),
            map,
            role,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum MapViolation {
    #[error("map has {got} entries for a source of {expected} worlds")]
    Shape { expected: usize, got: usize },
    #[error("image of {world} lies outside the target frame")]
    ForeignImage { world: String },
    #[error("a p-morphism must be total; {world} has no image")]
    Partial { world: String },
    #[error("forth condition fails for {x} R {y}")]
    Forth { x: String, y: String },
    #[error("back condition fails at {x} for target successor {y}")]
    Back { x: String, y: String },
}

/// Check the conditions belonging to the map's declared role.
pub fn check_map(m: &FrameMap) -> Result<(), MapViolation> {
    let (src, tgt) = (&m.source, &m.target);
    if m.map.len() != src.size() {
        return Err(MapViolation::Shape {
            expected: src.size(),
            got: m.map.len(),
        });
    }
    for (x, img) in m.map.iter().enumerate() {
        match img {
            Some(y) if *y >= tgt.size() => {
                return Err(MapViolation::ForeignImage {
                    world: src.name(x).into(),
                })
            }
            None if m.role == MapRole::PMorphism => {
                return Err(MapViolation::Partial {
                    world: src.name(x).into(),
                })
            }
            _ => {}
        }
    }
    for x in 0..src.size() {
        let Some(fx) = m.map[x] else { continue };
        for y in src.succ(x).worlds() {
            if let Some(fy) = m.map[y] {
                if !tgt.r(fx, fy) {
                    return Err(MapViolation::Forth {
                        x: src.name(x).into(),
                        y: src.name(y).into(),
                    });
                }
            }
        }
        for y2 in tgt.succ(fx).worlds() {
            if !src.succ(x).worlds().any(|z| m.map[z] == Some(y2)) {
                return Err(MapViolation::Back {
                    x: src.name(x).into(),
                    y: tgt.name(y2).into(),
                });
            }
        }
    }
    Ok(())
}
