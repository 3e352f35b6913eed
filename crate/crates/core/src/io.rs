//! JSON object and proof files.
//!
//! Numbers are written as exact rational strings such as `"2/3"`. On input,
//! strings may also be decimals (`"0.25"`, `"1e-3"`) and plain JSON numbers
//! are accepted; both are converted through their decimal text, never through
//! a float.

use std::path::Path;
use std::str::FromStr;

use num_bigint::BigInt;
use num_traits::Zero;
use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::channel::{ChanGameSpec, ChanTerm, ChanWitness, ChannelMatrix, DistinguishingChanGame};
use crate::conditional::{
    validate_game, CondGameSpec, CondTerm, CondWitness, DistinguishingCondGame, JointDistribution,
};
use crate::error::{Error, Result};
use crate::numerics::{Mat, Perm, ProbVector, SubDistribution};
use crate::Rat;

/// Parses `"a/b"`, an integer, or a decimal with optional exponent, exactly.
pub fn parse_rational(text: &str) -> Result<Rat> {
    let s = text.trim();
    let bad = || Error::Parse(format!("not a rational number: {text:?}"));
    if let Some((n, d)) = s.split_once('/') {
        let n = BigInt::from_str(n.trim()).map_err(|_| bad())?;
        let d = BigInt::from_str(d.trim()).map_err(|_| bad())?;
        if d.is_zero() {
            return Err(Error::Parse(format!("zero denominator in {text:?}")));
        }
        return Ok(Rat::new(n, d));
    }
    let (mantissa, exp) = match s.find(['e', 'E']) {
        Some(i) => (&s[..i], s[i + 1..].parse::<i32>().map_err(|_| bad())?),
        None => (s, 0),
    };
    let (int, frac) = mantissa.split_once('.').unwrap_or((mantissa, ""));
    let negative = int.starts_with('-');
    let unsigned = int.strip_prefix(['-', '+']).unwrap_or(int);
    let digits_ok = |d: &str| d.chars().all(|c| c.is_ascii_digit());
    if (unsigned.is_empty() && frac.is_empty()) || !digits_ok(unsigned) || !digits_ok(frac) {
        return Err(bad());
    }
    let digits = BigInt::from_str(&format!("{unsigned}{frac}")).map_err(|_| bad())?;
    let shift = exp - frac.len() as i32;
    let scale = num_traits::pow(BigInt::from(10), shift.unsigned_abs() as usize);
    let value = if shift >= 0 { Rat::from_integer(digits * scale) } else { Rat::new(digits, scale) };
    Ok(if negative { -value } else { value })
}

fn rat_from_value(v: &Value) -> Result<Rat> {
    match v {
        Value::String(s) => parse_rational(s),
        Value::Number(n) => parse_rational(&n.to_string()),
        other => Err(Error::Parse(format!("expected a number, found {other}"))),
    }
}

fn vector_from_value(v: &Value) -> Result<Vec<Rat>> {
    match v {
        Value::Array(items) => items.iter().map(rat_from_value).collect(),
        other => Err(Error::Parse(format!("expected an array of numbers, found {other}"))),
    }
}

fn matrix_from_value(v: &Value) -> Result<Mat<Rat>> {
    match v {
        Value::Array(rows) if rows.iter().all(Value::is_array) => {
            Mat::from_rows(rows.iter().map(vector_from_value).collect::<Result<_>>()?)
        }
        other => Err(Error::Parse(format!("expected an array of rows, found {other}"))),
    }
}

fn rat_to_value(x: &Rat) -> Value {
    Value::String(x.to_string())
}

fn vector_to_value(v: &[Rat]) -> Value {
    Value::Array(v.iter().map(rat_to_value).collect())
}

fn matrix_to_value(m: &Mat<Rat>) -> Value {
    Value::Array((0..m.rows()).map(|i| vector_to_value(m.row(i))).collect())
}

/// Tags stating what rows and columns of `data` mean.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Conventions {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub rows: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub columns: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ObjectFile {
    pub kind: String,
    pub data: Value,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub conventions: Option<Conventions>,
}

/// Game matrix with game sizes as rows and choices (or hints) as columns.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GameMatrix(Mat<Rat>);

impl GameMatrix {
    pub fn new(t: Mat<Rat>) -> Result<Self> {
        validate_game(&t)?;
        Ok(GameMatrix(t))
    }

    pub fn mat(&self) -> &Mat<Rat> {
        &self.0
    }

    pub fn cond(&self) -> CondGameSpec<Rat> {
        CondGameSpec::new(self.0.clone()).expect("validated")
    }

    pub fn chan(&self) -> ChanGameSpec<Rat> {
        ChanGameSpec::new(self.0.clone()).expect("validated")
    }

    /// The single column of a vector game.
    pub fn vector(&self) -> Result<SubDistribution<Rat>> {
        if self.0.cols() != 1 {
            return Err(Error::InvalidGame(format!("dice games take one column, found {}", self.0.cols())));
        }
        SubDistribution::new(self.0.col(0))
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Object {
    Dice(ProbVector<Rat>),
    Joint(JointDistribution<Rat>),
    Channel(ChannelMatrix<Rat>),
    Game(GameMatrix),
}

impl Object {
    pub fn kind(&self) -> &'static str {
        match self {
            Object::Dice(_) => "dice",
            Object::Joint(_) => "joint",
            Object::Channel(_) => "channel",
            Object::Game(_) => "game",
        }
    }
}

const JOINT_TAGS: (&str, &str) = ("revealed", "hidden");
const CHANNEL_TAGS: (&str, &str) = ("outputs", "inputs");
const GAME_TAGS: (&str, &str) = ("sizes", "choices");

/// Whether the file stores the transpose of the canonical layout.
fn transposed(conv: &Option<Conventions>, (row_tag, col_tag): (&str, &str)) -> Result<bool> {
    let Some(c) = conv else { return Ok(false) };
    let rows = c.rows.as_deref();
    let cols = c.columns.as_deref();
    let straight = rows.is_none_or(|r| r == row_tag) && cols.is_none_or(|c| c == col_tag);
    let flipped = rows.is_none_or(|r| r == col_tag) && cols.is_none_or(|c| c == row_tag);
    match (straight, flipped) {
        (true, _) => Ok(false),
        (false, true) => Ok(true),
        _ => Err(Error::Parse(format!(
            "conventions must tag rows and columns as {row_tag:?}/{col_tag:?} or the reverse"
        ))),
    }
}

impl ObjectFile {
    pub fn into_object(self) -> Result<Object> {
        match self.kind.as_str() {
            "dice" => Ok(Object::Dice(ProbVector::new(vector_from_value(&self.data)?)?)),
            "joint" => {
                let m = matrix_from_value(&self.data)?;
                let m = if transposed(&self.conventions, JOINT_TAGS)? { m.transpose() } else { m };
                Ok(Object::Joint(JointDistribution::new(m)?))
            }
            "channel" => {
                let m = matrix_from_value(&self.data)?;
                let m = if transposed(&self.conventions, CHANNEL_TAGS)? { m.transpose() } else { m };
                Ok(Object::Channel(ChannelMatrix::new(m)?))
            }
            "game" => {
                let m = match &self.data {
                    Value::Array(items) if items.iter().all(|v| !v.is_array()) => {
                        let v = vector_from_value(&self.data)?;
                        Mat::new(v.len(), 1, v)?
                    }
                    _ => {
                        let m = matrix_from_value(&self.data)?;
                        if transposed(&self.conventions, GAME_TAGS)? {
                            m.transpose()
                        } else {
                            m
                        }
                    }
                };
                Ok(Object::Game(GameMatrix::new(m)?))
            }
            other => Err(Error::Parse(format!("unknown kind {other:?}"))),
        }
    }

    /// Canonical form: exact strings, default layout, explicit conventions.
    pub fn from_object(obj: &Object) -> Self {
        let tags = |(r, c): (&str, &str)| Some(Conventions { rows: Some(r.into()), columns: Some(c.into()) });
        let (data, conventions) = match obj {
            Object::Dice(p) => (vector_to_value(p.entries()), None),
            Object::Joint(j) => (matrix_to_value(j.original()), tags(JOINT_TAGS)),
            Object::Channel(c) => (matrix_to_value(c.original()), tags(CHANNEL_TAGS)),
            Object::Game(g) => (matrix_to_value(g.mat()), tags(GAME_TAGS)),
        };
        ObjectFile { kind: obj.kind().into(), data, conventions }
    }
}

pub fn parse_object_str(text: &str) -> Result<Object> {
    let file: ObjectFile = serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
    file.into_object()
}

pub fn parse_object(path: &Path) -> Result<Object> {
    let text = std::fs::read_to_string(path).map_err(|e| Error::Parse(format!("{}: {e}", path.display())))?;
    parse_object_str(&text)
}

pub fn object_to_json(obj: &Object) -> String {
    serde_json::to_string_pretty(&ObjectFile::from_object(obj)).expect("plain JSON values")
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ProofKind {
    Witness,
    DistinguishingGame,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ProofRelation {
    Conditional,
    Channel,
}

/// Serialized proof. `payoff_a` and `payoff_b` refer to the two objects in
/// the order they were given on the command line.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ProofFile {
    pub kind: ProofKind,
    pub relation: ProofRelation,
    pub payload: Value,
    pub verified: bool,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Proof {
    CondWitness(CondWitness<Rat>),
    CondGame(DistinguishingCondGame<Rat>),
    ChanWitness(ChanWitness<Rat>),
    ChanGame(DistinguishingChanGame<Rat>),
}

#[derive(Serialize, Deserialize)]
struct TermRepr {
    s: Value,
    v: Perm,
}

#[derive(Serialize, Deserialize)]
struct WitnessRepr {
    terms: Vec<TermRepr>,
}

#[derive(Serialize, Deserialize)]
struct GameRepr {
    game: Value,
    payoff_a: Value,
    payoff_b: Value,
}

fn to_value<S: Serialize>(s: &S) -> Value {
    serde_json::to_value(s).expect("plain JSON values")
}

fn from_value<D: for<'de> Deserialize<'de>>(v: &Value) -> Result<D> {
    D::deserialize(v).map_err(|e| Error::Parse(format!("proof payload: {e}")))
}

impl Proof {
    pub fn to_file(&self, verified: bool) -> ProofFile {
        let terms = |pairs: Vec<(&Mat<Rat>, &Perm)>| {
            to_value(&WitnessRepr {
                terms: pairs.into_iter().map(|(s, v)| TermRepr { s: matrix_to_value(s), v: v.clone() }).collect(),
            })
        };
        let game = |t: &Mat<Rat>, a: &Rat, b: &Rat| {
            to_value(&GameRepr { game: matrix_to_value(t), payoff_a: rat_to_value(a), payoff_b: rat_to_value(b) })
        };
        let (kind, relation, payload) = match self {
            Proof::CondWitness(w) => {
                (ProofKind::Witness, ProofRelation::Conditional, terms(w.terms.iter().map(|t| (&t.s, &t.v)).collect()))
            }
            Proof::ChanWitness(w) => {
                (ProofKind::Witness, ProofRelation::Channel, terms(w.terms.iter().map(|t| (&t.s, &t.v)).collect()))
            }
            Proof::CondGame(g) => (
                ProofKind::DistinguishingGame,
                ProofRelation::Conditional,
                game(g.game.mat(), &g.payoff_p, &g.payoff_q),
            ),
            Proof::ChanGame(g) => (
                ProofKind::DistinguishingGame,
                ProofRelation::Channel,
                game(g.game.mat(), &g.payoff_weaker, &g.payoff_stronger),
            ),
        };
        ProofFile { kind, relation, payload, verified }
    }

    pub fn from_file(file: &ProofFile) -> Result<Self> {
        match file.kind {
            ProofKind::Witness => {
                let repr: WitnessRepr = from_value(&file.payload)?;
                let mut pairs = Vec::with_capacity(repr.terms.len());
                for t in repr.terms {
                    pairs.push((matrix_from_value(&t.s)?, t.v));
                }
                Ok(match file.relation {
                    ProofRelation::Conditional => Proof::CondWitness(CondWitness {
                        terms: pairs.into_iter().map(|(s, v)| CondTerm { s, v }).collect(),
                    }),
                    ProofRelation::Channel => Proof::ChanWitness(ChanWitness {
                        terms: pairs.into_iter().map(|(s, v)| ChanTerm { v, s }).collect(),
                    }),
                })
            }
            ProofKind::DistinguishingGame => {
                let repr: GameRepr = from_value(&file.payload)?;
                let t = matrix_from_value(&repr.game)?;
                let (a, b) = (rat_from_value(&repr.payoff_a)?, rat_from_value(&repr.payoff_b)?);
                Ok(match file.relation {
                    ProofRelation::Conditional => Proof::CondGame(DistinguishingCondGame {
                        game: CondGameSpec::new(t)?,
                        payoff_p: a,
                        payoff_q: b,
                    }),
                    ProofRelation::Channel => Proof::ChanGame(DistinguishingChanGame {
                        game: ChanGameSpec::new(t)?,
                        payoff_weaker: a,
                        payoff_stronger: b,
                    }),
                })
            }
        }
    }

    /// Re-checks the proof against the objects `a` and `b` in command-line order:
    /// `(P, Q)` for the conditional relation and `(M, N)` for channels.
    pub fn verify(&self, a: &Object, b: &Object) -> Result<bool> {
        match (self, a, b) {
            (Proof::CondWitness(w), Object::Joint(p), Object::Joint(q)) => Ok(w.verify(p, q)),
            (Proof::CondGame(g), Object::Joint(p), Object::Joint(q)) => Ok(g.verify(p, q)),
            (Proof::ChanWitness(w), Object::Channel(m), Object::Channel(n)) => Ok(w.verify(m, n)),
            (Proof::ChanGame(g), Object::Channel(m), Object::Channel(n)) => Ok(g.verify(m, n)),
            _ => Err(Error::Parse(format!("proof does not apply to a {} and a {}", a.kind(), b.kind()))),
        }
    }
}

pub fn proof_to_json(file: &ProofFile) -> String {
    serde_json::to_string_pretty(file).expect("plain JSON values")
}

pub fn parse_proof_str(text: &str) -> Result<ProofFile> {
    serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))
}

pub fn parse_proof(path: &Path) -> Result<ProofFile> {
    let text = std::fs::read_to_string(path).map_err(|e| Error::Parse(format!("{}: {e}", path.display())))?;
    parse_proof_str(&text)
}
