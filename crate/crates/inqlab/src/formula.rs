//! Formulas of the intuitionistic inquisitive and dependence languages.
//!
//! The AST has six node kinds. Negation, verum and dependence atoms are
//! rewritten away by the parser and the smart constructors:
//!
//! | surface        | node                          |
//! |----------------|-------------------------------|
//! | `~a`           | `a -> _|_`                    |
//! | top            | `_|_ -> _|_`                  |
//! | `dep(p)`       | `p \/ ~p`                     |
//! | `dep(p1,..;q)` | `dep(p1) & .. -> dep(q)`      |

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt;
use std::str::FromStr;

use thiserror::Error;

/// A formula over atomic propositions.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Formula {
    Atom(String),
    Bot,
    And(Box<Formula>, Box<Formula>),
    Or(Box<Formula>, Box<Formula>),
    Impl(Box<Formula>, Box<Formula>),
    Tensor(Box<Formula>, Box<Formula>),
}

impl Formula {
    /// Atom constructor. Panics on names outside `[a-z][a-z0-9]*`.
    pub fn atom(name: &str) -> Formula {
        assert!(is_atom_name(name), "illegal atom name {name:?}");
        Formula::Atom(name.to_string())
    }

    pub fn and(l: Formula, r: Formula) -> Formula {
        Formula::And(Box::new(l), Box::new(r))
    }

    pub fn or(l: Formula, r: Formula) -> Formula {
        Formula::Or(Box::new(l), Box::new(r))
    }

    pub fn imp(l: Formula, r: Formula) -> Formula {
        Formula::Impl(Box::new(l), Box::new(r))
    }

    pub fn tensor(l: Formula, r: Formula) -> Formula {
        Formula::Tensor(Box::new(l), Box::new(r))
    }

    pub fn not(f: Formula) -> Formula {
        Formula::imp(f, Formula::Bot)
    }

    pub fn top() -> Formula {
        Formula::imp(Formula::Bot, Formula::Bot)
    }

    /// `dep(p)`, i.e. `p \/ ~p`.
    pub fn dep(p: Formula) -> Formula {
        Formula::or(p.clone(), Formula::not(p))
    }

    /// `dep(p1,...,pn;q)`. The antecedent conjunction nests to the left.
    pub fn dep_on(ps: &[Formula], q: Formula) -> Formula {
        match ps.split_first() {
            None => Formula::dep(q),
            Some((first, rest)) => {
                let ante = rest.iter().fold(Formula::dep(first.clone()), |acc, p| {
                    Formula::and(acc, Formula::dep(p.clone()))
                });
                Formula::imp(ante, Formula::dep(q))
            }
        }
    }

    /// Left-nested conjunction of a nonempty list.
    pub fn conj(parts: impl IntoIterator<Item = Formula>) -> Option<Formula> {
        parts.into_iter().reduce(Formula::and)
    }

    /// Left-nested disjunction of a nonempty list.
    pub fn disj(parts: impl IntoIterator<Item = Formula>) -> Option<Formula> {
        parts.into_iter().reduce(Formula::or)
    }

    /// True iff no `Or` node occurs.
    pub fn is_standard(&self) -> bool {
        match self {
            Formula::Atom(_) | Formula::Bot => true,
            Formula::Or(..) => false,
            Formula::And(l, r) | Formula::Impl(l, r) | Formula::Tensor(l, r) => l.is_standard() && r.is_standard(),
        }
    }

    /// True iff no `Tensor` node occurs.
    pub fn is_intuitionistic(&self) -> bool {
        match self {
            Formula::Atom(_) | Formula::Bot => true,
            Formula::Tensor(..) => false,
            Formula::And(l, r) | Formula::Or(l, r) | Formula::Impl(l, r) => {
                l.is_intuitionistic() && r.is_intuitionistic()
            }
        }
    }

    pub fn atoms(&self) -> BTreeSet<String> {
        let mut out = BTreeSet::new();
        self.collect_atoms(&mut out);
        out
    }

    fn collect_atoms(&self, out: &mut BTreeSet<String>) {
        match self {
            Formula::Atom(a) => {
                out.insert(a.clone());
            }
            Formula::Bot => {}
            Formula::And(l, r) | Formula::Or(l, r) | Formula::Impl(l, r) | Formula::Tensor(l, r) => {
                l.collect_atoms(out);
                r.collect_atoms(out);
            }
        }
    }

    /// Number of nodes.
    pub fn size(&self) -> usize {
        match self.children() {
            None => 1,
            Some((l, r)) => 1 + l.size() + r.size(),
        }
    }

    pub fn depth(&self) -> usize {
        match self.children() {
            None => 0,
            Some((l, r)) => 1 + l.depth().max(r.depth()),
        }
    }

    pub fn children(&self) -> Option<(&Formula, &Formula)> {
        match self {
            Formula::Atom(_) | Formula::Bot => None,
            Formula::And(l, r) | Formula::Or(l, r) | Formula::Impl(l, r) | Formula::Tensor(l, r) => Some((l, r)),
        }
    }

    /// All distinct subformulas, children before parents.
    pub fn subformulas(&self) -> Vec<Formula> {
        let mut seen = BTreeSet::new();
        let mut out = Vec::new();
        self.collect_subformulas(&mut seen, &mut out);
        out
    }

    fn collect_subformulas(&self, seen: &mut BTreeSet<Formula>, out: &mut Vec<Formula>) {
        if let Some((l, r)) = self.children() {
            l.collect_subformulas(seen, out);
            r.collect_subformulas(seen, out);
        }
        if seen.insert(self.clone()) {
            out.push(self.clone());
        }
    }

    fn map_children(&self, f: &mut impl FnMut(&Formula) -> Formula) -> Formula {
        match self {
            Formula::Atom(_) | Formula::Bot => self.clone(),
            Formula::And(l, r) => Formula::and(f(l), f(r)),
            Formula::Or(l, r) => Formula::or(f(l), f(r)),
            Formula::Impl(l, r) => Formula::imp(f(l), f(r)),
            Formula::Tensor(l, r) => Formula::tensor(f(l), f(r)),
        }
    }

    /// Simultaneous substitution without any side condition.
    pub fn substitute(&self, sigma: &BTreeMap<String, Formula>) -> Formula {
        match self {
            Formula::Atom(a) => sigma.get(a).cloned().unwrap_or_else(|| self.clone()),
            _ => self.map_children(&mut |c| c.substitute(sigma)),
        }
    }
}

pub fn is_atom_name(s: &str) -> bool {
    let mut chars = s.chars();
    matches!(chars.next(), Some('a'..='z')) && chars.all(|c| c.is_ascii_lowercase() || c.is_ascii_digit())
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FormulaError {
    #[error("substituent for {atom} is not standard")]
    NonStandardSubstituent { atom: String },
    #[error("{schema} takes {expected} arguments, got {got}")]
    SchemaArityMismatch { schema: Axiom, expected: usize, got: usize },
    #[error("{schema} slot {slot} requires a standard formula")]
    NonStandardSlot { schema: Axiom, slot: usize },
    #[error("unknown axiom schema {0:?}")]
    UnknownSchema(String),
}

/// Substitution of standard formulas for atoms.
pub fn substitute_standard(phi: &Formula, sigma: &BTreeMap<String, Formula>) -> Result<Formula, FormulaError> {
    if let Some((atom, _)) = sigma.iter().find(|(_, f)| !f.is_standard()) {
        return Err(FormulaError::NonStandardSubstituent { atom: atom.clone() });
    }
    Ok(phi.substitute(sigma))
}

// ---------------------------------------------------------------------------
// Disjunctive normal form

/// Standard disjuncts whose disjunction is team-equivalent to `phi`.
///
/// Works bottom-up: `Or` concatenates, `And` and `Tensor` take products, and
/// `Impl` with antecedent disjuncts `a_1..a_n` and consequent disjuncts
/// `b_1..b_m` produces one disjunct `(a_1 -> b_f(1)) & .. & (a_n -> b_f(n))`
/// per function `f: [n] -> [m]`.
pub fn dnf(phi: &Formula) -> Vec<Formula> {
    match phi {
        Formula::Atom(_) | Formula::Bot => vec![phi.clone()],
        Formula::Or(l, r) => {
            let mut out = dnf(l);
            out.extend(dnf(r));
            out
        }
        Formula::And(l, r) => product(&dnf(l), &dnf(r), Formula::and),
        Formula::Tensor(l, r) => product(&dnf(l), &dnf(r), Formula::tensor),
        Formula::Impl(l, r) => {
            let ante = dnf(l);
            let cons = dnf(r);
            let mut out = Vec::new();
            let mut choice = vec![0usize; ante.len()];
            loop {
                let parts = ante
                    .iter()
                    .zip(&choice)
                    .map(|(a, &j)| Formula::imp(a.clone(), cons[j].clone()));
                out.push(Formula::conj(parts).expect("dnf lists are nonempty"));
                // odometer over [m]^n, last position fastest
                let mut i = ante.len();
                loop {
                    if i == 0 {
                        return out;
                    }
                    i -= 1;
                    choice[i] += 1;
                    if choice[i] < cons.len() {
                        break;
                    }
                    choice[i] = 0;
                }
            }
        }
    }
}

fn product(xs: &[Formula], ys: &[Formula], op: fn(Formula, Formula) -> Formula) -> Vec<Formula> {
    let mut out = Vec::with_capacity(xs.len() * ys.len());
    for x in xs {
        for y in ys {
            out.push(op(x.clone(), y.clone()));
        }
    }
    out
}

// ---------------------------------------------------------------------------
// Axiom schemata

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Axiom {
    A1,
    A2,
    A3,
    A4,
    A5,
    A6,
    A7,
    A8,
    A9,
    A10,
    A11,
    A12,
    A13,
    A14,
    A15,
}

impl Axiom {
    pub const ALL: [Axiom; 15] = [
        Axiom::A1,
        Axiom::A2,
        Axiom::A3,
        Axiom::A4,
        Axiom::A5,
        Axiom::A6,
        Axiom::A7,
        Axiom::A8,
        Axiom::A9,
        Axiom::A10,
        Axiom::A11,
        Axiom::A12,
        Axiom::A13,
        Axiom::A14,
        Axiom::A15,
    ];

    pub fn arity(self) -> usize {
        use Axiom::*;
        match self {
            A9 => 1,
            A1 | A3 | A4 | A5 | A6 | A7 | A11 | A12 => 2,
            A2 | A8 | A10 | A13 | A15 => 3,
            A14 => 4,
        }
    }

    /// Slots that only accept standard formulas.
    pub fn standard_slots(self) -> &'static [usize] {
        match self {
            Axiom::A10 => &[0],
            Axiom::A11 | Axiom::A12 => &[0, 1],
            Axiom::A15 => &[0, 1, 2],
            _ => &[],
        }
    }

    /// Whether the schema belongs to the tensor-free fragment.
    pub fn is_intuitionistic(self) -> bool {
        self <= Axiom::A10
    }

    pub fn instantiate(self, args: &[Formula]) -> Result<Formula, FormulaError> {
        if args.len() != self.arity() {
            return Err(FormulaError::SchemaArityMismatch {
                schema: self,
                expected: self.arity(),
                got: args.len(),
            });
        }
        if let Some(&slot) = self.standard_slots().iter().find(|&&i| !args[i].is_standard()) {
            return Err(FormulaError::NonStandardSlot { schema: self, slot });
        }
        let a = |i: usize| args[i].clone();
        use Formula as F;
        Ok(match self {
            Axiom::A1 => F::imp(a(0), F::imp(a(1), a(0))),
            Axiom::A2 => F::imp(
                F::imp(a(0), F::imp(a(1), a(2))),
                F::imp(F::imp(a(0), a(1)), F::imp(a(0), a(2))),
            ),
            Axiom::A3 => F::imp(F::and(a(0), a(1)), a(0)),
            Axiom::A4 => F::imp(F::and(a(0), a(1)), a(1)),
            Axiom::A5 => F::imp(a(0), F::imp(a(1), F::and(a(0), a(1)))),
            Axiom::A6 => F::imp(a(0), F::or(a(0), a(1))),
            Axiom::A7 => F::imp(a(1), F::or(a(0), a(1))),
            Axiom::A8 => F::imp(
                F::imp(a(0), a(2)),
                F::imp(F::imp(a(1), a(2)), F::imp(F::or(a(0), a(1)), a(2))),
            ),
            Axiom::A9 => F::imp(F::Bot, a(0)),
            Axiom::A10 => F::imp(
                F::imp(a(0), F::or(a(1), a(2))),
                F::or(F::imp(a(0), a(1)), F::imp(a(0), a(2))),
            ),
            Axiom::A11 => F::imp(a(0), F::tensor(a(0), a(1))),
            Axiom::A12 => F::imp(F::tensor(a(0), a(1)), F::tensor(a(1), a(0))),
            Axiom::A13 => F::imp(
                F::tensor(a(0), F::or(a(1), a(2))),
                F::or(F::tensor(a(0), a(1)), F::tensor(a(0), a(2))),
            ),
            Axiom::A14 => F::imp(
                F::imp(a(0), a(2)),
                F::imp(F::imp(a(1), a(3)), F::imp(F::tensor(a(0), a(1)), F::tensor(a(2), a(3)))),
            ),
            Axiom::A15 => F::imp(
                F::imp(a(0), a(2)),
                F::imp(F::imp(a(1), a(2)), F::imp(F::tensor(a(0), a(1)), a(2))),
            ),
        })
    }
}

impl fmt::Display for Axiom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "A{}", *self as usize + 1)
    }
}

impl FromStr for Axiom {
    type Err = FormulaError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let n: usize = s
            .strip_prefix(['A', 'a'])
            .and_then(|d| d.parse().ok())
            .ok_or_else(|| FormulaError::UnknownSchema(s.to_string()))?;
        Axiom::ALL
            .get(n.wrapping_sub(1))
            .copied()
            .ok_or_else(|| FormulaError::UnknownSchema(s.to_string()))
    }
}

/// Instantiate a schema by identifier.
pub fn axiom_instances(schema: Axiom, args: &[Formula]) -> Result<Formula, FormulaError> {
    schema.instantiate(args)
}

// ---------------------------------------------------------------------------
// Printing

const PREC_IMPL: u8 = 1;
const PREC_OR: u8 = 2;
const PREC_TENSOR: u8 = 3;
const PREC_AND: u8 = 4;
const PREC_UNARY: u8 = 5;

fn precedence(phi: &Formula) -> u8 {
    match phi {
        Formula::Atom(_) | Formula::Bot => u8::MAX,
        Formula::Impl(_, r) if **r == Formula::Bot => PREC_UNARY,
        Formula::Impl(..) => PREC_IMPL,
        Formula::Or(..) => PREC_OR,
        Formula::Tensor(..) => PREC_TENSOR,
        Formula::And(..) => PREC_AND,
    }
}

fn write_prec(phi: &Formula, min: u8, out: &mut String) {
    let wrap = precedence(phi) < min;
    if wrap {
        out.push('(');
    }
    match phi {
        Formula::Atom(a) => out.push_str(a),
        Formula::Bot => out.push_str("_|_"),
        Formula::Impl(l, r) if **r == Formula::Bot => {
            out.push('~');
            write_prec(l, PREC_UNARY, out);
        }
        Formula::Impl(l, r) => write_binary(l, r, " -> ", PREC_OR, PREC_IMPL, out),
        Formula::Or(l, r) => write_binary(l, r, " \\/ ", PREC_OR, PREC_TENSOR, out),
        Formula::Tensor(l, r) => write_binary(l, r, " (*) ", PREC_TENSOR, PREC_AND, out),
        Formula::And(l, r) => write_binary(l, r, " & ", PREC_AND, PREC_UNARY, out),
    }
    if wrap {
        out.push(')');
    }
}

fn write_binary(l: &Formula, r: &Formula, op: &str, lp: u8, rp: u8, out: &mut String) {
    write_prec(l, lp, out);
    out.push_str(op);
    write_prec(r, rp, out);
}

impl fmt::Display for Formula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut s = String::new();
        write_prec(self, 0, &mut s);
        f.write_str(&s)
    }
}

// ---------------------------------------------------------------------------
// Parsing

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParseError {
    #[error("unknown token {found:?} at offset {pos}")]
    UnknownToken { pos: usize, found: char },
    #[error("expected {expected} at offset {pos}, found {found}")]
    Syntax {
        pos: usize,
        expected: &'static str,
        found: String,
    },
    #[error("nesting deeper than {limit} at offset {pos}")]
    TooDeep { pos: usize, limit: usize },
}

impl ParseError {
    pub fn position(&self) -> usize {
        match *self {
            ParseError::UnknownToken { pos, .. } | ParseError::Syntax { pos, .. } | ParseError::TooDeep { pos, .. } => {
                pos
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
enum Tok {
    Atom(String),
    Dep,
    Bot,
    Not,
    And,
    Or,
    Tensor,
    Arrow,
    LParen,
    RParen,
    Comma,
    Semi,
    Eof,
}

impl fmt::Display for Tok {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Tok::Atom(a) => return write!(f, "atom `{a}`"),
            Tok::Dep => "`dep`",
            Tok::Bot => "`_|_`",
            Tok::Not => "`~`",
            Tok::And => "`&`",
            Tok::Or => "`\\/`",
            Tok::Tensor => "`(*)`",
            Tok::Arrow => "`->`",
            Tok::LParen => "`(`",
            Tok::RParen => "`)`",
            Tok::Comma => "`,`",
            Tok::Semi => "`;`",
            Tok::Eof => "end of input",
        };
        f.write_str(s)
    }
}

fn lex(text: &str) -> Result<Vec<(usize, Tok)>, ParseError> {
    let bytes = text.as_bytes();
    let mut toks = Vec::new();
    let mut i = 0;
    while i < bytes.len() {
        let rest = &text[i..];
        let c = rest.chars().next().expect("in bounds");
        if c.is_whitespace() {
            i += c.len_utf8();
            continue;
        }
        let fixed = [
            ("(*)", Tok::Tensor),
            ("_|_", Tok::Bot),
            ("\\/", Tok::Or),
            ("->", Tok::Arrow),
            ("~", Tok::Not),
            ("&", Tok::And),
            ("(", Tok::LParen),
            (")", Tok::RParen),
            (",", Tok::Comma),
            (";", Tok::Semi),
        ];
        if let Some((lit, tok)) = fixed.iter().find(|(lit, _)| rest.starts_with(lit)) {
            toks.push((i, tok.clone()));
            i += lit.len();
            continue;
        }
        if c.is_ascii_lowercase() {
            let len = rest
                .bytes()
                .take_while(|b| b.is_ascii_lowercase() || b.is_ascii_digit())
                .count();
            let word = &rest[..len];
            let next = rest[len..].trim_start();
            let tok = if word == "dep" && next.starts_with('(') && !next.starts_with("(*)") {
                Tok::Dep
            } else {
                Tok::Atom(word.to_string())
            };
            toks.push((i, tok));
            i += len;
            continue;
        }
        return Err(ParseError::UnknownToken { pos: i, found: c });
    }
    toks.push((text.len(), Tok::Eof));
    Ok(toks)
}

const MAX_NESTING: usize = 200;

struct Parser {
    toks: Vec<(usize, Tok)>,
    at: usize,
    depth: usize,
}

impl Parser {
    fn peek(&self) -> &Tok {
        &self.toks[self.at].1
    }

    fn pos(&self) -> usize {
        self.toks[self.at].0
    }

    fn bump(&mut self) -> Tok {
        let t = self.toks[self.at].1.clone();
        if t != Tok::Eof {
            self.at += 1;
        }
        t
    }

    fn eat(&mut self, t: &Tok) -> bool {
        if self.peek() == t {
            self.bump();
            true
        } else {
            false
        }
    }

    fn expect(&mut self, t: Tok, expected: &'static str) -> Result<(), ParseError> {
        if self.eat(&t) {
            Ok(())
        } else {
            Err(self.unexpected(expected))
        }
    }

    fn unexpected(&self, expected: &'static str) -> ParseError {
        ParseError::Syntax {
            pos: self.pos(),
            expected,
            found: self.peek().to_string(),
        }
    }

    fn enter(&mut self) -> Result<(), ParseError> {
        self.depth += 1;
        if self.depth > MAX_NESTING {
            return Err(ParseError::TooDeep {
                pos: self.pos(),
                limit: MAX_NESTING,
            });
        }
        Ok(())
    }

    fn implication(&mut self) -> Result<Formula, ParseError> {
        self.enter()?;
        let lhs = self.disjunction()?;
        let out = if self.eat(&Tok::Arrow) {
            Formula::imp(lhs, self.implication()?)
        } else {
            lhs
        };
        self.depth -= 1;
        Ok(out)
    }

    fn disjunction(&mut self) -> Result<Formula, ParseError> {
        let mut acc = self.tensor()?;
        while self.eat(&Tok::Or) {
            acc = Formula::or(acc, self.tensor()?);
        }
        Ok(acc)
    }

    fn tensor(&mut self) -> Result<Formula, ParseError> {
        let mut acc = self.conjunction()?;
        while self.eat(&Tok::Tensor) {
            acc = Formula::tensor(acc, self.conjunction()?);
        }
        Ok(acc)
    }

    fn conjunction(&mut self) -> Result<Formula, ParseError> {
        let mut acc = self.unary()?;
        while self.eat(&Tok::And) {
            acc = Formula::and(acc, self.unary()?);
        }
        Ok(acc)
    }

    fn unary(&mut self) -> Result<Formula, ParseError> {
        if self.eat(&Tok::Not) {
            self.enter()?;
            let inner = self.unary()?;
            self.depth -= 1;
            return Ok(Formula::not(inner));
        }
        self.primary()
    }

    fn primary(&mut self) -> Result<Formula, ParseError> {
        match self.peek().clone() {
            Tok::Atom(a) => {
                self.bump();
                Ok(Formula::Atom(a))
            }
            Tok::Bot => {
                self.bump();
                Ok(Formula::Bot)
            }
            Tok::LParen => {
                self.bump();
                let inner = self.implication()?;
                self.expect(Tok::RParen, "`)`")?;
                Ok(inner)
            }
            Tok::Dep => {
                self.bump();
                self.dependence()
            }
            _ => Err(self.unexpected("a formula")),
        }
    }

    fn dep_atom(&mut self) -> Result<Formula, ParseError> {
        match self.peek().clone() {
            Tok::Atom(a) => {
                self.bump();
                Ok(Formula::Atom(a))
            }
            _ => Err(self.unexpected("an atom inside dep(...)")),
        }
    }

    // `dep(p)`, `dep(p1,...,pn,q)` or `dep(p1,...,pn;q)`
    fn dependence(&mut self) -> Result<Formula, ParseError> {
        self.expect(Tok::LParen, "`(` after dep")?;
        let mut args = vec![self.dep_atom()?];
        while self.eat(&Tok::Comma) {
            args.push(self.dep_atom()?);
        }
        let q = if self.eat(&Tok::Semi) {
            self.dep_atom()?
        } else {
            args.pop().expect("at least one argument")
        };
        self.expect(Tok::RParen, "`)` closing dep")?;
        Ok(Formula::dep_on(&args, q))
    }
}

/// Parse the ASCII surface syntax.
pub fn parse(text: &str) -> Result<Formula, ParseError> {
    let mut p = Parser {
        toks: lex(text)?,
        at: 0,
        depth: 0,
    };
    let f = p.implication()?;
    if *p.peek() != Tok::Eof {
        return Err(p.unexpected("end of input"));
    }
    Ok(f)
}

impl FromStr for Formula {
    type Err = ParseError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        parse(s)
    }
}

// ---------------------------------------------------------------------------
// Hash-consed view used by the evaluators

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Node {
    /// Index into [`Dag::atoms`].
    Atom(usize),
    Bot,
    And(usize, usize),
    Or(usize, usize),
    Impl(usize, usize),
    Tensor(usize, usize),
}

/// A formula with shared subformulas merged; nodes are stored children first.
#[derive(Clone, Debug)]
pub struct Dag {
    pub nodes: Vec<Node>,
    pub atoms: Vec<String>,
    pub root: usize,
}

impl Dag {
    pub fn new(phi: &Formula) -> Dag {
        let atoms: Vec<String> = phi.atoms().into_iter().collect();
        let mut b = DagBuilder {
            nodes: Vec::new(),
            index: HashMap::new(),
            atoms: &atoms,
        };
        let root = b.add(phi);
        let nodes = b.nodes;
        Dag { nodes, atoms, root }
    }

    pub fn uses_tensor(&self) -> bool {
        self.nodes.iter().any(|n| matches!(n, Node::Tensor(..)))
    }
}

struct DagBuilder<'a> {
    nodes: Vec<Node>,
    index: HashMap<Node, usize>,
    atoms: &'a [String],
}

impl DagBuilder<'_> {
    fn add(&mut self, phi: &Formula) -> usize {
        let node = match phi {
            Formula::Atom(a) => Node::Atom(self.atoms.binary_search(a).expect("collected atom")),
            Formula::Bot => Node::Bot,
            Formula::And(l, r) => Node::And(self.add(l), self.add(r)),
            Formula::Or(l, r) => Node::Or(self.add(l), self.add(r)),
            Formula::Impl(l, r) => Node::Impl(self.add(l), self.add(r)),
            Formula::Tensor(l, r) => Node::Tensor(self.add(l), self.add(r)),
        };
        if let Some(&id) = self.index.get(&node) {
            return id;
        }
        self.nodes.push(node);
        self.index.insert(node, self.nodes.len() - 1);
        self.nodes.len() - 1
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(s: &str) -> Formula {
        parse(s).unwrap()
    }

    fn a(s: &str) -> Formula {
        Formula::atom(s)
    }

    #[test]
    fn grammar_examples() {
        assert_eq!(p("p -> (q \\/ r)"), Formula::imp(a("p"), Formula::or(a("q"), a("r"))));
        assert_eq!(p("~p"), Formula::imp(a("p"), Formula::Bot));
        let dep_p = Formula::or(a("p"), Formula::imp(a("p"), Formula::Bot));
        let dep_q = Formula::or(a("q"), Formula::imp(a("q"), Formula::Bot));
        assert_eq!(p("dep(p,q)"), Formula::imp(dep_p.clone(), dep_q.clone()));
        assert_eq!(p("dep(p;q)"), p("dep(p,q)"));
        assert_eq!(p("dep(p)"), dep_p);
    }

    #[test]
    fn precedence_and_associativity() {
        assert_eq!(p("p & q (*) r \\/ s -> t"), p("(((p & q) (*) r) \\/ s) -> t"));
        assert_eq!(p("p -> q -> r"), p("p -> (q -> r)"));
        assert_eq!(p("p & q & r"), p("(p & q) & r"));
        assert_eq!(p("~p & q"), p("(~p) & q"));
        assert_eq!(p("~~p"), Formula::not(Formula::not(a("p"))));
    }

    #[test]
    fn dep_as_plain_atom() {
        assert_eq!(p("dep"), a("dep"));
        assert_eq!(p("dep (*) p"), Formula::tensor(a("dep"), a("p")));
        assert_eq!(p("dep & p1"), Formula::and(a("dep"), a("p1")));
    }

    #[test]
    fn multi_antecedent_dep() {
        let expect = Formula::imp(
            Formula::and(Formula::dep(a("p")), Formula::dep(a("q"))),
            Formula::dep(a("r")),
        );
        assert_eq!(p("dep(p, q; r)"), expect);
        assert_eq!(p("dep(p,q,r)"), expect);
    }

    #[test]
    fn parse_errors_carry_positions() {
        assert_eq!(parse("p + q"), Err(ParseError::UnknownToken { pos: 2, found: '+' }));
        assert_eq!(parse("p -> ").unwrap_err().position(), 5);
        assert_eq!(parse("(p & q").unwrap_err().position(), 6);
        assert!(matches!(parse("p q"), Err(ParseError::Syntax { pos: 2, .. })));
        assert!(matches!(parse("dep(p -> q)"), Err(ParseError::Syntax { pos: 6, .. })));
        assert!(matches!(parse("P"), Err(ParseError::UnknownToken { pos: 0, .. })));
        let deep = "(".repeat(1000) + "p" + &")".repeat(1000);
        assert!(matches!(parse(&deep), Err(ParseError::TooDeep { .. })));
    }

    #[test]
    fn printing() {
        for s in [
            "p -> q \\/ r",
            "(p -> q) -> r",
            "~~p -> p",
            "p & (q & r)",
            "p (*) q \\/ r",
            "p (*) (q \\/ r)",
            "~(p & q)",
            "~_|_",
            "_|_ -> p",
            "(p -> _|_) -> _|_",
        ] {
            let f = p(s);
            assert_eq!(p(&f.to_string()), f, "{s}");
        }
        assert_eq!(p("((p -> q)) -> (r)").to_string(), "(p -> q) -> r");
        assert_eq!(p("(p -> _|_) -> _|_").to_string(), "~~p");
    }

    #[test]
    fn standardness() {
        assert!(p("p & q").is_standard());
        assert!(!p("p \\/ ~p").is_standard());
        assert!(p("p (*) q").is_standard());
        assert!(!p("p (*) q").is_intuitionistic());
    }

    #[test]
    fn substitution_examples() {
        let sigma: BTreeMap<_, _> = [("p".to_string(), p("~r"))].into();
        assert_eq!(substitute_standard(&p("p \\/ q"), &sigma).unwrap(), p("~r \\/ q"));
        assert_eq!(substitute_standard(&p("p"), &BTreeMap::new()).unwrap(), p("p"));
        let sigma: BTreeMap<_, _> = [("p".to_string(), p("q & r"))].into();
        assert_eq!(
            substitute_standard(&p("p -> p"), &sigma).unwrap(),
            p("(q & r) -> (q & r)")
        );
        let bad: BTreeMap<_, _> = [("p".to_string(), p("q \\/ r"))].into();
        assert_eq!(
            substitute_standard(&p("p"), &bad),
            Err(FormulaError::NonStandardSubstituent { atom: "p".into() })
        );
    }

    #[test]
    fn substitution_is_simultaneous() {
        let sigma: BTreeMap<_, _> = [("p".to_string(), a("q")), ("q".to_string(), a("p"))].into();
        assert_eq!(substitute_standard(&p("p -> q"), &sigma).unwrap(), p("q -> p"));
    }

    #[test]
    fn dnf_examples() {
        assert_eq!(dnf(&p("p -> (q \\/ r)")), vec![p("p -> q"), p("p -> r")]);
        assert_eq!(
            dnf(&p("(p \\/ ~p) & (q \\/ ~q)")),
            vec![p("p & q"), p("p & ~q"), p("~p & q"), p("~p & ~q")]
        );
        assert_eq!(dnf(&p("p & q")), vec![p("p & q")]);
    }

    #[test]
    fn dnf_of_implication_enumerates_functions() {
        // two antecedent disjuncts, two consequent disjuncts: 2^2 choice functions
        let out = dnf(&p("(p \\/ q) -> (r \\/ s)"));
        assert_eq!(
            out,
            vec![
                p("(p -> r) & (q -> r)"),
                p("(p -> r) & (q -> s)"),
                p("(p -> s) & (q -> r)"),
                p("(p -> s) & (q -> s)"),
            ]
        );
        assert_eq!(dnf(&p("(p \\/ q) (*) r")), vec![p("p (*) r"), p("q (*) r")]);
    }

    #[test]
    fn axiom_examples() {
        let (pp, q, r) = (a("p"), a("q"), a("r"));
        assert_eq!(
            Axiom::A10.instantiate(&[pp.clone(), q.clone(), r.clone()]).unwrap(),
            p("(p -> (q \\/ r)) -> ((p -> q) \\/ (p -> r))")
        );
        assert_eq!(Axiom::A9.instantiate(std::slice::from_ref(&pp)).unwrap(), p("_|_ -> p"));
        assert_eq!(
            Axiom::A12.instantiate(&[pp.clone(), q.clone()]).unwrap(),
            p("(p (*) q) -> (q (*) p)")
        );
        assert!(matches!(
            Axiom::A1.instantiate(std::slice::from_ref(&pp)),
            Err(FormulaError::SchemaArityMismatch {
                expected: 2,
                got: 1,
                ..
            })
        ));
        assert_eq!(
            Axiom::A15.instantiate(&[pp.clone(), p("q \\/ r"), r]),
            Err(FormulaError::NonStandardSlot {
                schema: Axiom::A15,
                slot: 1
            })
        );
        assert!(Axiom::A1.instantiate(&[p("q \\/ r"), pp]).is_ok());
    }

    #[test]
    fn axiom_names_round_trip() {
        for ax in Axiom::ALL {
            assert_eq!(ax.to_string().parse::<Axiom>().unwrap(), ax);
        }
        assert!("A0".parse::<Axiom>().is_err());
        assert!("A16".parse::<Axiom>().is_err());
        assert!("B3".parse::<Axiom>().is_err());
    }

    #[test]
    fn dag_shares_subformulas() {
        let f = p("(p & q) -> (p & q)");
        let dag = Dag::new(&f);
        assert_eq!(dag.nodes.len(), 4);
        assert_eq!(dag.atoms, vec!["p".to_string(), "q".to_string()]);
        assert_eq!(dag.root, 3);
    }
}
