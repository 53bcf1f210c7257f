//! TOML configuration. Rationals are written as strings (`"-3/2"`, `"0.25"`) or integers.

use std::fmt;

use serde::Deserialize;

use miniwalls_core::lattice::{ClassVec, LatticeModel, Preset};
use miniwalls_core::moduli::TorsionConvention;
use miniwalls_core::rational::parse_rational;
use miniwalls_core::{CharVec, EngineError, FilterLevel, Interval, Rational, SearchBounds, Segment, StabilityParams};

#[derive(Debug, Clone, Deserialize)]
#[serde(untagged)]
pub enum RationalText {
    Int(i64),
    Text(String),
}

impl fmt::Display for RationalText {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            RationalText::Int(n) => write!(f, "{n}"),
            RationalText::Text(s) => f.write_str(s),
        }
    }
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LatticeSection {
    pub preset: Option<String>,
    pub gram: Option<Vec<Vec<RationalText>>>,
    pub ample_ref: Option<Vec<RationalText>>,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct StabilitySection {
    pub beta: Vec<RationalText>,
    pub omega: Vec<RationalText>,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TypeSection {
    pub rank: i64,
    pub c1: Vec<RationalText>,
    pub ch2: Option<RationalText>,
    pub c2: Option<RationalText>,
    pub torsion_convention: Option<String>,
}

#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SearchSection {
    pub rank_bound: Option<u32>,
    pub filter: Option<String>,
    pub box_bound: Option<u32>,
    pub threshold_base: Option<RationalText>,
    pub c_step: Option<RationalText>,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct IntervalSection {
    pub lo: RationalText,
    pub hi: Option<RationalText>,
}

#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EvaluateSection {
    pub m: Option<RationalText>,
    pub other: Option<TypeSection>,
    pub scan_step: Option<RationalText>,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RegionSection {
    pub from: Vec<RationalText>,
    pub to: Vec<RationalText>,
}

#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OutputSection {
    pub format: Option<String>,
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub enum OutputFormat {
    #[default]
    Records,
    Table,
}

impl OutputFormat {
    pub fn from_name(name: &str) -> Option<Self> {
        match name {
            "records" => Some(OutputFormat::Records),
            "table" => Some(OutputFormat::Table),
            _ => None,
        }
    }
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RawConfig {
    pub lattice: LatticeSection,
    pub stability: StabilitySection,
    #[serde(rename = "type")]
    pub type_: TypeSection,
    #[serde(default)]
    pub search: SearchSection,
    pub interval: Option<IntervalSection>,
    #[serde(default)]
    pub evaluate: EvaluateSection,
    pub region: Option<RegionSection>,
    #[serde(default)]
    pub output: OutputSection,
}

/// Validation failure with the offending field path.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConfigError {
    pub path: String,
    pub message: String,
}

impl fmt::Display for ConfigError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.path.is_empty() {
            f.write_str(&self.message)
        } else {
            write!(f, "{}: {}", self.path, self.message)
        }
    }
}

fn at(path: &str) -> impl Fn(EngineError) -> ConfigError + '_ {
    move |e| ConfigError {
        path: path.to_string(),
        message: e.to_string(),
    }
}

fn invalid(path: &str, message: impl Into<String>) -> ConfigError {
    ConfigError {
        path: path.to_string(),
        message: message.into(),
    }
}

fn rational(path: &str, v: &RationalText) -> Result<Rational, ConfigError> {
    match v {
        RationalText::Int(n) => Ok(Rational::from_integer((*n).into())),
        RationalText::Text(s) => parse_rational(s).map_err(at(path)),
    }
}

fn class(path: &str, v: &[RationalText]) -> Result<ClassVec, ConfigError> {
    v.iter()
        .enumerate()
        .map(|(i, x)| rational(&format!("{path}[{i}]"), x))
        .collect::<Result<Vec<_>, _>>()
        .map(ClassVec::new)
}

/// Command-line overrides applied on top of the file.
#[derive(Debug, Clone, Default)]
pub struct Overrides {
    pub interval: Option<(String, String)>,
    pub rank_bound: Option<u32>,
    pub filter: Option<FilterLevel>,
    pub box_bound: Option<u32>,
    pub format: Option<OutputFormat>,
}

/// Fully validated configuration.
#[derive(Debug, Clone)]
pub struct EngineConfig {
    pub params: StabilityParams,
    pub t: CharVec,
    pub convention: TorsionConvention,
    pub bounds: SearchBounds,
    pub box_bound: u32,
    pub threshold_base: Rational,
    pub interval: Option<Interval>,
    pub m: Option<Rational>,
    pub other: Option<CharVec>,
    pub scan_step: Option<Rational>,
    pub region: Option<Segment>,
    pub format: OutputFormat,
}

pub const DEFAULT_BOX_BOUND: u32 = 5;

fn lattice(sec: &LatticeSection) -> Result<LatticeModel, ConfigError> {
    match (&sec.preset, &sec.gram) {
        (Some(name), None) => {
            if sec.ample_ref.is_some() {
                return Err(invalid("lattice.ample_ref", "only allowed together with lattice.gram"));
            }
            Preset::from_name(name)
                .map(LatticeModel::preset)
                .ok_or_else(|| invalid("lattice.preset", format!("unknown preset {name:?}; use P2 or P1xP1")))
        }
        (None, Some(rows)) => {
            let gram = rows
                .iter()
                .enumerate()
                .map(|(i, row)| class(&format!("lattice.gram[{i}]"), row).map(|c| c.0))
                .collect::<Result<Vec<_>, _>>()?;
            let ample = sec
                .ample_ref
                .as_ref()
                .ok_or_else(|| invalid("lattice.ample_ref", "required with lattice.gram"))?;
            LatticeModel::new(gram, class("lattice.ample_ref", ample)?).map_err(at("lattice"))
        }
        _ => Err(invalid("lattice", "give exactly one of preset or gram")),
    }
}

fn char_vec(path: &str, sec: &TypeSection, l: &LatticeModel) -> Result<CharVec, ConfigError> {
    let c1 = class(&format!("{path}.c1"), &sec.c1)?;
    l.check_dim(&c1).map_err(at(&format!("{path}.c1")))?;
    match (&sec.ch2, &sec.c2) {
        (Some(ch2), None) => {
            CharVec::new(sec.rank, c1, rational(&format!("{path}.ch2"), ch2)?).map_err(at(&format!("{path}.c1")))
        }
        (None, Some(c2)) => CharVec::from_c2(sec.rank, c1, rational(&format!("{path}.c2"), c2)?, l)
            .map_err(at(&format!("{path}.c1"))),
        _ => Err(invalid(path, "give exactly one of ch2 or c2")),
    }
}

impl EngineConfig {
    pub fn from_toml(text: &str, overrides: &Overrides) -> Result<Self, ConfigError> {
        let raw: RawConfig = toml::from_str(text).map_err(|e| invalid("", e.to_string().trim_end().to_string()))?;
        Self::from_raw(&raw, overrides)
    }

    pub fn from_raw(raw: &RawConfig, overrides: &Overrides) -> Result<Self, ConfigError> {
        let l = lattice(&raw.lattice)?;
        let beta = class("stability.beta", &raw.stability.beta)?;
        let omega = class("stability.omega", &raw.stability.omega)?;
        l.check_dim(&beta).map_err(at("stability.beta"))?;
        l.check_dim(&omega).map_err(at("stability.omega"))?;
        let params = StabilityParams::new(l.clone(), beta, omega).map_err(at("stability.omega"))?;
        let t = char_vec("type", &raw.type_, &l)?;
        let convention = match &raw.type_.torsion_convention {
            None => TorsionConvention::default(),
            Some(name) => TorsionConvention::from_name(name)
                .ok_or_else(|| invalid("type.torsion_convention", format!("unknown convention {name:?}")))?,
        };

        let search = &raw.search;
        let level = match (overrides.filter, &search.filter) {
            (Some(lv), _) => lv,
            (None, Some(name)) => FilterLevel::from_name(name)
                .ok_or_else(|| invalid("search.filter", format!("unknown filter {name:?}")))?,
            (None, None) => FilterLevel::BSideBogomolov,
        };
        let mut bounds = match overrides.rank_bound.or(search.rank_bound) {
            Some(n) => SearchBounds::new(n, level).map_err(at("search.rank_bound"))?,
            None => SearchBounds::default_for(t.rk, level),
        };
        if let Some(step) = &search.c_step {
            bounds = bounds
                .with_c_step(rational("search.c_step", step)?)
                .map_err(at("search.c_step"))?;
        }
        let box_bound = overrides.box_bound.or(search.box_bound).unwrap_or(DEFAULT_BOX_BOUND);
        if box_bound == 0 {
            return Err(invalid("search.box_bound", "must be positive"));
        }
        let threshold_base = match &search.threshold_base {
            Some(v) => rational("search.threshold_base", v)?,
            None => Rational::from_integer(miniwalls_core::miniwalls::DEFAULT_THRESHOLD_BASE.into()),
        };
        if threshold_base <= Rational::from_integer(0.into()) {
            return Err(invalid("search.threshold_base", "must be positive"));
        }

        let interval = match (&overrides.interval, &raw.interval) {
            (Some((lo, hi)), _) => {
                let lo = parse_rational(lo).map_err(at("--interval"))?;
                let hi = parse_rational(hi).map_err(at("--interval"))?;
                Some(Interval::closed(lo, hi).map_err(at("--interval"))?)
            }
            (None, Some(sec)) => {
                let lo = rational("interval.lo", &sec.lo)?;
                Some(match &sec.hi {
                    Some(hi) => Interval::closed(lo, rational("interval.hi", hi)?).map_err(at("interval"))?,
                    None => Interval::from(lo).map_err(at("interval"))?,
                })
            }
            (None, None) => None,
        };

        let ev = &raw.evaluate;
        let m = ev.m.as_ref().map(|v| rational("evaluate.m", v)).transpose()?;
        let other = ev.other.as_ref().map(|o| char_vec("evaluate.other", o, &l)).transpose()?;
        let scan_step = ev.scan_step.as_ref().map(|v| rational("evaluate.scan_step", v)).transpose()?;
        let region = match &raw.region {
            Some(r) => {
                let from = class("region.from", &r.from)?;
                let to = class("region.to", &r.to)?;
                l.check_dim(&from).map_err(at("region.from"))?;
                l.check_dim(&to).map_err(at("region.to"))?;
                Some(Segment { from, to })
            }
            None => None,
        };
        let format = match (overrides.format, &raw.output.format) {
            (Some(f), _) => f,
            (None, Some(name)) => OutputFormat::from_name(name)
                .ok_or_else(|| invalid("output.format", format!("unknown format {name:?}; use records or table")))?,
            (None, None) => OutputFormat::default(),
        };
        Ok(EngineConfig {
            params,
            t,
            convention,
            bounds,
            box_bound,
            threshold_base,
            interval,
            m,
            other,
            scan_step,
            region,
            format,
        })
    }

    pub fn require_interval(&self) -> Result<&Interval, ConfigError> {
        self.interval
            .as_ref()
            .ok_or_else(|| invalid("interval", "required (set [interval] or pass --interval a b)"))
    }

    pub fn require_m(&self) -> Result<&Rational, ConfigError> {
        self.m.as_ref().ok_or_else(|| invalid("evaluate.m", "required"))
    }
}
