//! Serialized report records.
//!
//! Every rational is `{num, den, decimal}`; `num` and `den` are exact JSON
//! integers of arbitrary size and are the canonical fields.

use std::str::FromStr;

use num_bigint::BigInt;
use serde::{Deserialize, Serialize};
use serde_json::Number;

use miniwalls_core::classical::WallXi;
use miniwalls_core::lattice::{ClassVec, LatticeModel};
use miniwalls_core::rational::to_decimal;
use miniwalls_core::{CandidateShadow, CharVec, MiniWall, Rational, Shadow};

pub const DECIMAL_DIGITS: usize = 12;

pub fn number(n: &BigInt) -> Number {
    Number::from_str(&n.to_string()).expect("integers are valid JSON numbers")
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RationalRecord {
    pub num: Number,
    pub den: Number,
    pub decimal: String,
}

impl RationalRecord {
    pub fn new(x: &Rational) -> Self {
        RationalRecord {
            num: number(x.numer()),
            den: number(x.denom()),
            decimal: to_decimal(x, DECIMAL_DIGITS),
        }
    }

    /// Exact value from the canonical fields.
    pub fn value(&self) -> Option<Rational> {
        let n = BigInt::from_str(&self.num.to_string()).ok()?;
        let d = BigInt::from_str(&self.den.to_string()).ok()?;
        (d != BigInt::from(0)).then(|| Rational::new(n, d))
    }
}

impl From<&Rational> for RationalRecord {
    fn from(x: &Rational) -> Self {
        RationalRecord::new(x)
    }
}

pub fn class_record(v: &ClassVec) -> Vec<RationalRecord> {
    v.coords().iter().map(RationalRecord::new).collect()
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TypeRecord {
    pub rank: i64,
    pub c1: Vec<RationalRecord>,
    pub ch2: RationalRecord,
    pub c2: RationalRecord,
}

impl TypeRecord {
    pub fn new(t: &CharVec, l: &LatticeModel) -> Self {
        TypeRecord {
            rank: t.rk,
            c1: class_record(t.c1()),
            ch2: t.ch2().into(),
            c2: (&t.c2(l).expect("dimension checked at load")).into(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ShadowRecord {
    pub rank: i64,
    pub x: RationalRecord,
    pub c: RationalRecord,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub filter_level_passed: Option<String>,
}

impl ShadowRecord {
    pub fn plain(s: &Shadow) -> Self {
        ShadowRecord {
            rank: s.rk,
            x: (&s.x).into(),
            c: (&s.c).into(),
            filter_level_passed: None,
        }
    }

    pub fn candidate(c: &CandidateShadow) -> Self {
        ShadowRecord {
            filter_level_passed: Some(c.filter_level_passed.name().to_string()),
            ..ShadowRecord::plain(&c.shadow)
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct IntervalRecord {
    pub lo: RationalRecord,
    pub hi: Option<RationalRecord>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct WallRecord {
    pub m_squared: RationalRecord,
    pub witnesses: Vec<ShadowRecord>,
}

impl WallRecord {
    pub fn new(w: &MiniWall) -> Self {
        WallRecord {
            m_squared: (&w.m_squared).into(),
            witnesses: w.witnesses.iter().map(ShadowRecord::candidate).collect(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SearchRecord {
    pub rank_bound: u32,
    pub filter: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct WallsReport {
    pub command: String,
    #[serde(rename = "type")]
    pub type_: TypeRecord,
    pub interval: IntervalRecord,
    pub search: SearchRecord,
    pub walls: Vec<WallRecord>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CellRecord {
    pub kind: String,
    pub lo_squared: Option<RationalRecord>,
    pub hi_squared: Option<RationalRecord>,
    pub wall: Option<WallRecord>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ChambersReport {
    pub command: String,
    #[serde(rename = "type")]
    pub type_: TypeRecord,
    pub interval: IntervalRecord,
    pub search: SearchRecord,
    pub cells: Vec<CellRecord>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ChargeValueRecord {
    pub m: RationalRecord,
    pub re: RationalRecord,
    pub im: RationalRecord,
    /// Display only: phase in `(0, 1]`, or `non-heart` / `zero`.
    pub phase: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ChargeReport {
    pub command: String,
    #[serde(rename = "type")]
    pub type_: TypeRecord,
    pub shadow: ShadowRecord,
    pub re2: RationalRecord,
    pub im1: RationalRecord,
    pub re0: RationalRecord,
    pub value: Option<ChargeValueRecord>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PhaseReport {
    pub command: String,
    #[serde(rename = "type")]
    pub type_: TypeRecord,
    pub other: TypeRecord,
    pub m: RationalRecord,
    pub imag_cross: RationalRecord,
    /// `greater` when the phase of `type` exceeds that of `other`.
    pub ordering: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct XiRecord {
    pub xi: Vec<RationalRecord>,
    pub s: i64,
    pub f: Vec<RationalRecord>,
    pub xi_squared: RationalRecord,
}

impl XiRecord {
    pub fn new(w: &WallXi, l: &LatticeModel) -> Self {
        XiRecord {
            xi: class_record(&w.xi),
            s: w.s,
            f: class_record(&w.f),
            xi_squared: (&l.square(&w.xi).expect("dimension checked")).into(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClassicalReport {
    pub command: String,
    #[serde(rename = "type")]
    pub type_: TypeRecord,
    pub region_from: Vec<RationalRecord>,
    pub region_to: Vec<RationalRecord>,
    pub box_bound: u32,
    pub saturated: bool,
    pub walls: Vec<XiRecord>,
    pub omega_on_wall: Option<XiRecord>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ThresholdReport {
    pub command: String,
    #[serde(rename = "type")]
    pub type_: TypeRecord,
    pub search: SearchRecord,
    pub base: RationalRecord,
    pub threshold: RationalRecord,
    pub max_wall_squared: Option<RationalRecord>,
    pub walls_above_base: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClassifyReport {
    pub command: String,
    #[serde(rename = "type")]
    pub type_: TypeRecord,
    pub classification: String,
    pub symmetric_power: Option<Number>,
    pub target_type: Option<TypeRecord>,
    pub wall: Option<XiRecord>,
    pub torsion_convention: String,
    pub box_bound: u32,
    pub notes: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct StratumRecord {
    #[serde(rename = "type")]
    pub type_: TypeRecord,
    pub c2: Number,
    pub sym_power: Number,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct StrataReport {
    pub command: String,
    #[serde(rename = "type")]
    pub type_: TypeRecord,
    pub strata: Vec<StratumRecord>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct BracketRecord {
    pub lo: RationalRecord,
    pub hi: RationalRecord,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MismatchRecord {
    pub candidate: ShadowRecord,
    pub step: RationalRecord,
    pub exact_m_squared: Option<RationalRecord>,
    pub brackets: Vec<BracketRecord>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct OracleReport {
    pub command: String,
    #[serde(rename = "type")]
    pub type_: TypeRecord,
    pub interval: IntervalRecord,
    pub search: SearchRecord,
    pub step: RationalRecord,
    pub candidates: usize,
    pub bracketed_pairs: usize,
    pub walls: Vec<RationalRecord>,
    pub mismatches: Vec<MismatchRecord>,
    pub clean: bool,
}
