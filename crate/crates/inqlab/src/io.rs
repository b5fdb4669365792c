//! JSON file formats for frames, models and algebras.

use std::collections::{BTreeMap, HashMap};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::algebra::{AlgebraError, Elem, FiniteAlgebra};
use crate::team::{Frame, Model, Team, TeamError};

/// Largest carrier accepted by the algebra decoder.
pub const MAX_ELEMENTS: usize = 256;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum IoError {
    #[error("malformed JSON: {0}")]
    Json(String),
    #[error(transparent)]
    Team(#[from] TeamError),
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
    #[error("unknown world {0:?}")]
    UnknownWorld(String),
    #[error("unknown element {0:?}")]
    UnknownElement(String),
    #[error("{op} table has no entry for ({x}, {y})")]
    MissingEntry { op: &'static str, x: String, y: String },
    #[error("{op} table lists ({x}, {y}) twice")]
    DuplicateEntry { op: &'static str, x: String, y: String },
    #[error("{op} table gives {got} for ({x}, {y}) but the order gives {expected}")]
    TableMismatch {
        op: &'static str,
        x: String,
        y: String,
        expected: String,
        got: String,
    },
    #[error("algebra has {0} elements; at most {MAX_ELEMENTS} are supported")]
    TooLarge(usize),
}

impl From<serde_json::Error> for IoError {
    fn from(e: serde_json::Error) -> Self {
        IoError::Json(e.to_string())
    }
}

/// `{"worlds": [...], "order": [[a, b], ...], "valuation": {world: [atoms]}}`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ModelFile {
    pub worlds: Vec<String>,
    #[serde(default)]
    pub order: Vec<(String, String)>,
    #[serde(default)]
    pub valuation: BTreeMap<String, Vec<String>>,
}

impl ModelFile {
    pub fn to_frame(&self) -> Result<Frame, IoError> {
        let index: HashMap<&str, usize> = self.worlds.iter().enumerate().map(|(i, w)| (w.as_str(), i)).collect();
        let world = |w: &String| {
            index
                .get(w.as_str())
                .copied()
                .ok_or_else(|| IoError::UnknownWorld(w.clone()))
        };
        let pairs = self
            .order
            .iter()
            .map(|(a, b)| Ok((world(a)?, world(b)?)))
            .collect::<Result<Vec<_>, IoError>>()?;
        Ok(Frame::poset(self.worlds.clone(), &pairs)?)
    }

    pub fn to_model(&self) -> Result<Model, IoError> {
        let frame = self.to_frame()?;
        let mut truth: BTreeMap<String, Team> = BTreeMap::new();
        for (w, atoms) in &self.valuation {
            let i = frame.world(w).ok_or_else(|| IoError::UnknownWorld(w.clone()))?;
            for a in atoms {
                truth.entry(a.clone()).or_default().0 |= 1 << i;
            }
        }
        Ok(Model::new(frame, truth)?)
    }

    /// Hasse covers as the order and one valuation entry per world.
    pub fn from_model(m: &Model) -> ModelFile {
        let mut file = ModelFile::from_frame(m.frame());
        file.valuation = (0..m.frame().size())
            .map(|w| (m.frame().name(w).to_string(), m.valuation_at(w).into_iter().collect()))
            .collect();
        file
    }

    pub fn from_frame(f: &Frame) -> ModelFile {
        ModelFile {
            worlds: f.names().to_vec(),
            order: f
                .covers()
                .into_iter()
                .map(|(a, b)| (f.name(a).to_string(), f.name(b).to_string()))
                .collect(),
            valuation: BTreeMap::new(),
        }
    }
}

pub fn decode_model(text: &str) -> Result<Model, IoError> {
    serde_json::from_str::<ModelFile>(text)?.to_model()
}

/// A frame file; a valuation block, if present, must still be well formed.
pub fn decode_frame(text: &str) -> Result<Frame, IoError> {
    let file: ModelFile = serde_json::from_str(text)?;
    Ok(file.to_model()?.frame().clone())
}

pub fn encode_model(m: &Model) -> String {
    serde_json::to_string(&ModelFile::from_model(m)).expect("plain data serialises")
}

pub fn encode_frame(f: &Frame) -> String {
    serde_json::to_string(&ModelFile::from_frame(f)).expect("plain data serialises")
}

/// `{"elements", "leq", "zero", "core", "tensor", "meet", "join", "impl", "provenance"}`.
///
/// `core` defaults to the whole carrier. `meet`, `join` and `impl` are optional and, when given,
/// must agree with the tables derived from the order. `provenance` is informational.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AlgebraFile {
    pub elements: Vec<String>,
    #[serde(default)]
    pub leq: Vec<(String, String)>,
    pub zero: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub core: Option<Vec<String>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub tensor: Option<Vec<(String, String, String)>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub meet: Option<Vec<(String, String, String)>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub join: Option<Vec<(String, String, String)>>,
    #[serde(default, rename = "impl", skip_serializing_if = "Option::is_none")]
    pub imp: Option<Vec<(String, String, String)>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub provenance: Option<BTreeMap<String, Vec<String>>>,
}

/// Rows `(x, y, x op y)` by element name.
type Table = Vec<(String, String, String)>;

fn read_table(
    op: &'static str,
    rows: &[(String, String, String)],
    elem: &dyn Fn(&str) -> Result<Elem, IoError>,
    names: &[String],
) -> Result<Vec<Elem>, IoError> {
    let n = names.len();
    let mut table = vec![usize::MAX; n * n];
    for (x, y, z) in rows {
        let (i, j, v) = (elem(x)?, elem(y)?, elem(z)?);
        if table[i * n + j] != usize::MAX {
            return Err(IoError::DuplicateEntry {
                op,
                x: x.clone(),
                y: y.clone(),
            });
        }
        table[i * n + j] = v;
    }
    if let Some(k) = table.iter().position(|&v| v == usize::MAX) {
        return Err(IoError::MissingEntry {
            op,
            x: names[k / n].clone(),
            y: names[k % n].clone(),
        });
    }
    Ok(table)
}

impl AlgebraFile {
    pub fn to_algebra(&self) -> Result<FiniteAlgebra, IoError> {
        let n = self.elements.len();
        if n > MAX_ELEMENTS {
            return Err(IoError::TooLarge(n));
        }
        let mut index: HashMap<&str, usize> = HashMap::new();
        for (i, e) in self.elements.iter().enumerate() {
            if index.insert(e.as_str(), i).is_some() {
                return Err(AlgebraError::DuplicateElement(e.clone()).into());
            }
        }
        let elem = |s: &str| {
            index
                .get(s)
                .copied()
                .ok_or_else(|| IoError::UnknownElement(s.to_string()))
        };
        let pairs = self
            .leq
            .iter()
            .map(|(a, b)| Ok((elem(a)?, elem(b)?)))
            .collect::<Result<Vec<_>, IoError>>()?;
        let zero = elem(&self.zero)?;
        let mut a = crate::algebra::derive_tables(self.elements.clone(), &pairs, zero)?;
        if let Some(core) = &self.core {
            let core = core.iter().map(|c| elem(c)).collect::<Result<Vec<_>, _>>()?;
            a = a.with_core(&core);
        }
        let given: [(&'static str, &Option<Table>, &dyn Fn(Elem, Elem) -> Elem); 3] = [
            ("meet", &self.meet, &|x, y| a.meet(x, y)),
            ("join", &self.join, &|x, y| a.join(x, y)),
            ("impl", &self.imp, &|x, y| a.imp(x, y)),
        ];
        for (op, rows, derived) in given {
            let Some(rows) = rows else { continue };
            let table = read_table(op, rows, &elem, &self.elements)?;
            for x in 0..n {
                for y in 0..n {
                    let (got, expected) = (table[x * n + y], derived(x, y));
                    if got != expected {
                        return Err(IoError::TableMismatch {
                            op,
                            x: self.elements[x].clone(),
                            y: self.elements[y].clone(),
                            expected: self.elements[expected].clone(),
                            got: self.elements[got].clone(),
                        });
                    }
                }
            }
        }
        if let Some(rows) = &self.tensor {
            let table = read_table("tensor", rows, &elem, &self.elements)?;
            a = a.with_tensor(table)?;
        }
        Ok(a)
    }

    /// Hasse covers for the order and full meet, join, implication and tensor tables.
    pub fn from_algebra(a: &FiniteAlgebra) -> AlgebraFile {
        let name = |e: Elem| a.name(e).to_string();
        let table = |f: &dyn Fn(Elem, Elem) -> Elem| -> Vec<(String, String, String)> {
            a.elems()
                .flat_map(|x| a.elems().map(move |y| (x, y)))
                .map(|(x, y)| (name(x), name(y), name(f(x, y))))
                .collect()
        };
        AlgebraFile {
            elements: a.names().to_vec(),
            leq: a.covers().into_iter().map(|(x, y)| (name(x), name(y))).collect(),
            zero: name(a.zero()),
            core: Some(a.core().into_iter().map(name).collect()),
            tensor: a.has_tensor().then(|| table(&|x, y| a.tensor(x, y).expect("present"))),
            meet: Some(table(&|x, y| a.meet(x, y))),
            join: Some(table(&|x, y| a.join(x, y))),
            imp: Some(table(&|x, y| a.imp(x, y))),
            provenance: None,
        }
    }
}

pub fn decode_algebra(text: &str) -> Result<FiniteAlgebra, IoError> {
    serde_json::from_str::<AlgebraFile>(text)?.to_algebra()
}

pub fn encode_algebra(a: &FiniteAlgebra) -> String {
    serde_json::to_string(&AlgebraFile::from_algebra(a)).expect("plain data serialises")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::validate_inq_algebra;

    #[test]
    fn model_example_loads() {
        let m = decode_model(r#"{"worlds":["w1","w2"],"order":[["w1","w2"]],"valuation":{"w2":["p"]}}"#).unwrap();
        assert!(m.frame().r(0, 1));
        assert_eq!(m.truth("p"), Team::singleton(1));
        assert_eq!(decode_model(&encode_model(&m)).unwrap(), m);
    }

    #[test]
    fn model_errors() {
        let not_persistent = r#"{"worlds":["w1","w2"],"order":[["w1","w2"]],"valuation":{"w1":["p"]}}"#;
        assert!(matches!(
            decode_model(not_persistent),
            Err(IoError::Team(TeamError::NotPersistent { .. }))
        ));
        assert_eq!(
            decode_model(r#"{"worlds":["w1"],"order":[["w1","w9"]]}"#),
            Err(IoError::UnknownWorld("w9".into()))
        );
        assert!(matches!(decode_model("{"), Err(IoError::Json(_))));
        assert!(matches!(
            decode_model(r#"{"worlds":["w1","w2"],"order":[["w1","w2"],["w2","w1"]]}"#),
            Err(IoError::Team(_))
        ));
    }

    #[test]
    fn algebra_example_loads() {
        let a = decode_algebra(r#"{"elements":["0","a","1"],"leq":[["0","a"],["a","1"]],"zero":"0","core":["0","1"]}"#)
            .unwrap();
        assert_eq!(a.core(), vec![0, 2]);
        assert_eq!(validate_inq_algebra(&a), Ok(()));
        let back = decode_algebra(&encode_algebra(&a)).unwrap();
        assert_eq!(back, a);
    }

    #[test]
    fn algebra_errors() {
        let bad_meet = r#"{"elements":["0","1"],"leq":[["0","1"]],"zero":"0","meet":[["0","0","0"],["0","1","0"],["1","0","0"],["1","1","0"]]}"#;
        assert!(matches!(
            decode_algebra(bad_meet),
            Err(IoError::TableMismatch { op: "meet", .. })
        ));
        let short_tensor = r#"{"elements":["0","1"],"leq":[["0","1"]],"zero":"0","tensor":[["0","0","0"]]}"#;
        assert!(matches!(
            decode_algebra(short_tensor),
            Err(IoError::MissingEntry { op: "tensor", .. })
        ));
        let no_lattice = r#"{"elements":["0","a","b"],"leq":[["0","a"],["0","b"]],"zero":"0"}"#;
        assert!(matches!(
            decode_algebra(no_lattice),
            Err(IoError::Algebra(AlgebraError::NotALattice(..)))
        ));
        assert!(matches!(
            decode_algebra(r#"{"elements":["0"],"zero":"z"}"#),
            Err(IoError::UnknownElement(_))
        ));
    }
}
