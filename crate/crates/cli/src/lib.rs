//! Command-line front end: configuration, dispatch and serialized reports.
//!
//! Exit codes: 0 on success, 2 on validation errors, 3 on refused computations.

pub mod config;
pub mod records;
pub mod table;

use std::ffi::OsString;
use std::path::PathBuf;

use clap::{Parser, Subcommand, ValueEnum};
use serde::Serialize;

use miniwalls_core::charge::DisplayPhase;
use miniwalls_core::classical::{omega_on_wall, walls_through_region};
use miniwalls_core::oracle::crosscheck_walls;
use miniwalls_core::{
    central_charge, chamber_decomposition, classify_moduli, dual_type, find_mini_walls, imag_cross,
    large_volume_threshold, phase_compare, uhlenbeck_strata, ChamberCell, EngineError, FilterLevel, ModuliKind,
    Segment,
};

use config::{ConfigError, EngineConfig, OutputFormat, Overrides};
use records::*;

pub const EXIT_OK: i32 = 0;
pub const EXIT_VALIDATION: i32 = 2;
pub const EXIT_REFUSED: i32 = 3;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum FilterArg {
    Heart,
    Aside,
    Bside,
}

impl From<FilterArg> for FilterLevel {
    fn from(f: FilterArg) -> Self {
        match f {
            FilterArg::Heart => FilterLevel::HeartOnly,
            FilterArg::Aside => FilterLevel::ASideBogomolov,
            FilterArg::Bside => FilterLevel::BSideBogomolov,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum FormatArg {
    Records,
    Table,
}

#[derive(Debug, Parser)]
#[command(name = "miniwalls", version, about = "Exact mini-wall and classical wall computations on surfaces")]
pub struct Cli {
    /// Engine configuration file (TOML).
    #[arg(long, global = true, value_name = "PATH")]
    pub config: Option<PathBuf>,
    /// Interval of m as two rationals, overriding [interval].
    #[arg(long, global = true, num_args = 2, value_names = ["A", "B"], allow_hyphen_values = true)]
    pub interval: Option<Vec<String>>,
    #[arg(long, global = true, value_name = "N")]
    pub rank_bound: Option<u32>,
    #[arg(long, global = true, value_enum)]
    pub filter: Option<FilterArg>,
    #[arg(long, global = true, value_name = "K")]
    pub box_bound: Option<u32>,
    #[arg(long, global = true, value_enum)]
    pub format: Option<FormatArg>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, Subcommand)]
pub enum Command {
    /// Central charge of the type.
    Charge {
        #[command(subcommand)]
        action: ChargeAction,
    },
    /// Phase order of the type against [evaluate.other].
    Phase {
        #[command(subcommand)]
        action: PhaseAction,
    },
    /// Mini-walls, mini-chambers and classical walls.
    Walls {
        #[command(subcommand)]
        action: WallsAction,
    },
    /// Large-volume threshold above which no mini-wall exists.
    Threshold,
    /// Moduli classification at large volume.
    Classify,
    /// Uhlenbeck strata of the type (of its dual type when the rank is negative).
    Strata,
    /// Independent sign-scan check of the mini-walls.
    Oracle {
        #[command(subcommand)]
        action: OracleAction,
    },
}

#[derive(Debug, Clone, Copy, Subcommand)]
pub enum ChargeAction {
    /// Coefficients of Z_m, and its value at [evaluate.m] when given.
    Eval,
}

#[derive(Debug, Clone, Copy, Subcommand)]
pub enum PhaseAction {
    Compare,
}

#[derive(Debug, Clone, Copy, Subcommand)]
pub enum WallsAction {
    Mini,
    Chambers,
    Classical,
}

#[derive(Debug, Clone, Copy, Subcommand)]
pub enum OracleAction {
    Verify,
}

impl Command {
    pub fn name(self) -> &'static str {
        match self {
            Command::Charge { .. } => "charge eval",
            Command::Phase { .. } => "phase compare",
            Command::Walls { action } => match action {
                WallsAction::Mini => "walls mini",
                WallsAction::Chambers => "walls chambers",
                WallsAction::Classical => "walls classical",
            },
            Command::Threshold => "threshold",
            Command::Classify => "classify",
            Command::Strata => "strata",
            Command::Oracle { .. } => "oracle verify",
        }
    }
}

/// A failed run: validation errors exit with 2, refusals with 3.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Failure {
    Validation(String),
    Refused(String),
}

impl Failure {
    pub fn exit_code(&self) -> i32 {
        match self {
            Failure::Validation(_) => EXIT_VALIDATION,
            Failure::Refused(_) => EXIT_REFUSED,
        }
    }

    pub fn message(&self) -> &str {
        match self {
            Failure::Validation(m) | Failure::Refused(m) => m,
        }
    }
}

impl From<EngineError> for Failure {
    fn from(e: EngineError) -> Self {
        if e.is_refusal() {
            Failure::Refused(e.to_string())
        } else {
            Failure::Validation(e.to_string())
        }
    }
}

impl From<ConfigError> for Failure {
    fn from(e: ConfigError) -> Self {
        Failure::Validation(e.to_string())
    }
}

/// Result of one invocation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Outcome {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

/// Parses arguments, runs the command and renders the output.
pub fn run<I, T>(args: I) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let text = e.render().to_string();
            return if e.use_stderr() {
                Outcome {
                    code: EXIT_VALIDATION,
                    stdout: String::new(),
                    stderr: text,
                }
            } else {
                Outcome {
                    code: EXIT_OK,
                    stdout: text,
                    stderr: String::new(),
                }
            };
        }
    };
    match execute(&cli) {
        Ok(stdout) => Outcome {
            code: EXIT_OK,
            stdout,
            stderr: String::new(),
        },
        Err(f) => Outcome {
            code: f.exit_code(),
            stdout: String::new(),
            stderr: format!("error: {}\n", f.message()),
        },
    }
}

fn overrides(cli: &Cli) -> Overrides {
    Overrides {
        interval: cli.interval.as_ref().map(|v| (v[0].clone(), v[1].clone())),
        rank_bound: cli.rank_bound,
        filter: cli.filter.map(Into::into),
        box_bound: cli.box_bound,
        format: cli.format.map(|f| match f {
            FormatArg::Records => OutputFormat::Records,
            FormatArg::Table => OutputFormat::Table,
        }),
    }
}

/// Loads the configuration named by `--config` with the flag overrides applied.
pub fn load_config(cli: &Cli) -> Result<EngineConfig, Failure> {
    let path = cli
        .config
        .as_ref()
        .ok_or_else(|| Failure::Validation("--config PATH is required".into()))?;
    let text = std::fs::read_to_string(path)
        .map_err(|e| Failure::Validation(format!("cannot read {}: {e}", path.display())))?;
    Ok(EngineConfig::from_toml(&text, &overrides(cli))?)
}

fn execute(cli: &Cli) -> Result<String, Failure> {
    let cfg = load_config(cli)?;
    let value = report(cli.command, &cfg)?;
    Ok(match cfg.format {
        OutputFormat::Records => {
            let mut s = serde_json::to_string_pretty(&value).expect("reports serialize");
            s.push('\n');
            s
        }
        OutputFormat::Table => table::render(&value),
    })
}

fn to_value(r: &impl Serialize) -> serde_json::Value {
    serde_json::to_value(r).expect("reports serialize")
}

fn interval_record(iv: &miniwalls_core::Interval) -> IntervalRecord {
    IntervalRecord {
        lo: (&iv.lo).into(),
        hi: iv.hi.as_ref().map(Into::into),
    }
}

fn search_record(cfg: &EngineConfig) -> SearchRecord {
    SearchRecord {
        rank_bound: cfg.bounds.rank_bound(),
        filter: cfg.bounds.level.name().to_string(),
    }
}

/// Runs one command against a validated configuration.
pub fn report(command: Command, cfg: &EngineConfig) -> Result<serde_json::Value, Failure> {
    let p = &cfg.params;
    let l = p.lattice();
    let t = &cfg.t;
    let type_ = TypeRecord::new(t, l);
    let name = command.name().to_string();
    Ok(match command {
        Command::Charge { .. } => {
            let shadow = p.shadow(t)?;
            let z = central_charge(&shadow, p);
            let value = match &cfg.m {
                Some(m) => {
                    if m <= &miniwalls_core::rational::int(0) {
                        return Err(EngineError::NonPositiveParameter.into());
                    }
                    let (re, im) = z.eval(m);
                    let phase = match z.display_phase(m) {
                        DisplayPhase::Phase(x) => format!("{x:.12}"),
                        DisplayPhase::NonHeart => "non-heart".into(),
                        DisplayPhase::Zero => "zero".into(),
                    };
                    Some(ChargeValueRecord {
                        m: m.into(),
                        re: (&re).into(),
                        im: (&im).into(),
                        phase,
                    })
                }
                None => None,
            };
            to_value(&ChargeReport {
                command: name,
                type_,
                shadow: ShadowRecord::plain(&shadow),
                re2: (&z.re2).into(),
                im1: (&z.im1).into(),
                re0: (&z.re0).into(),
                value,
            })
        }
        Command::Phase { .. } => {
            let other = cfg
                .other
                .as_ref()
                .ok_or_else(|| Failure::Validation("evaluate.other: required".into()))?;
            let m = cfg.require_m()?;
            let ordering = phase_compare(t, other, p, m)?;
            let cross = imag_cross(&p.shadow(t)?, &p.shadow(other)?, p, m);
            to_value(&PhaseReport {
                command: name,
                type_,
                other: TypeRecord::new(other, l),
                m: m.into(),
                imag_cross: (&cross).into(),
                ordering: match ordering {
                    std::cmp::Ordering::Greater => "greater",
                    std::cmp::Ordering::Less => "less",
                    std::cmp::Ordering::Equal => "equal",
                }
                .into(),
            })
        }
        Command::Walls {
            action: WallsAction::Mini,
        } => {
            let iv = cfg.require_interval()?;
            let walls = find_mini_walls(t, p, iv, &cfg.bounds)?;
            to_value(&WallsReport {
                command: name,
                type_,
                interval: interval_record(iv),
                search: search_record(cfg),
                walls: walls.iter().map(WallRecord::new).collect(),
            })
        }
        Command::Walls {
            action: WallsAction::Chambers,
        } => {
            let iv = cfg.require_interval()?;
            let cells = chamber_decomposition(t, p, iv, &cfg.bounds)?
                .into_iter()
                .map(|c| match c {
                    ChamberCell::Chamber { lo_sq, hi_sq } => CellRecord {
                        kind: "chamber".into(),
                        lo_squared: Some((&lo_sq).into()),
                        hi_squared: hi_sq.as_ref().map(Into::into),
                        wall: None,
                    },
                    ChamberCell::Wall(w) => CellRecord {
                        kind: "wall".into(),
                        lo_squared: Some((&w.m_squared).into()),
                        hi_squared: Some((&w.m_squared).into()),
                        wall: Some(WallRecord::new(&w)),
                    },
                })
                .collect();
            to_value(&ChambersReport {
                command: name,
                type_,
                interval: interval_record(iv),
                search: search_record(cfg),
                cells,
            })
        }
        Command::Walls {
            action: WallsAction::Classical,
        } => {
            let region = cfg.region.clone().unwrap_or_else(|| Segment {
                from: p.omega().clone(),
                to: p.omega().clone(),
            });
            let found = walls_through_region(t, l, &region, cfg.box_bound)?;
            let on_wall = omega_on_wall(p.omega(), t, l, cfg.box_bound)?;
            to_value(&ClassicalReport {
                command: name,
                type_,
                region_from: class_record(&region.from),
                region_to: class_record(&region.to),
                box_bound: found.box_bound,
                saturated: found.saturated,
                walls: found.walls.iter().map(|w| XiRecord::new(w, l)).collect(),
                omega_on_wall: on_wall.as_ref().map(|w| XiRecord::new(w, l)),
            })
        }
        Command::Threshold => {
            let th = large_volume_threshold(t, p, &cfg.bounds, &cfg.threshold_base)?;
            to_value(&ThresholdReport {
                command: name,
                type_,
                search: search_record(cfg),
                base: (&th.base).into(),
                threshold: (&th.value).into(),
                max_wall_squared: th.max_wall_sq.as_ref().map(Into::into),
                walls_above_base: th.walls_above_base,
            })
        }
        Command::Classify => {
            let wall = if t.rk != 0 {
                omega_on_wall(p.omega(), t, l, cfg.box_bound)?
            } else {
                None
            };
            let class = classify_moduli(t, p, wall.as_ref(), cfg.convention)?;
            let symmetric_power = match &class.kind {
                ModuliKind::SymmetricProduct(n) => Some(number(n)),
                _ => None,
            };
            let wall = match &class.kind {
                ModuliKind::OnWallUndetermined(w) => Some(XiRecord::new(w, l)),
                _ => None,
            };
            to_value(&ClassifyReport {
                command: name,
                type_,
                classification: class.kind.tag().to_string(),
                symmetric_power,
                target_type: class.kind.target_type().map(|tt| TypeRecord::new(tt, l)),
                wall,
                torsion_convention: cfg.convention.name().to_string(),
                box_bound: cfg.box_bound,
                notes: class.notes,
            })
        }
        Command::Strata => {
            let base = if t.rk < 0 { dual_type(t) } else { t.clone() };
            let strata = uhlenbeck_strata(&base, l)?;
            to_value(&StrataReport {
                command: name,
                type_,
                strata: strata
                    .iter()
                    .map(|s| StratumRecord {
                        type_: TypeRecord::new(&s.stratum_type, l),
                        c2: number(&s.c2),
                        sym_power: number(&s.sym_power),
                    })
                    .collect(),
            })
        }
        Command::Oracle { .. } => {
            let iv = cfg.require_interval()?;
            let r = crosscheck_walls(t, p, iv, &cfg.bounds, cfg.scan_step.clone())?;
            to_value(&OracleReport {
                command: name,
                type_,
                interval: interval_record(iv),
                search: search_record(cfg),
                step: (&r.step).into(),
                candidates: r.candidates,
                bracketed_pairs: r.bracketed_pairs,
                walls: r.walls.iter().map(Into::into).collect(),
                clean: r.is_clean(),
                mismatches: r
                    .mismatches
                    .iter()
                    .map(|s| MismatchRecord {
                        candidate: ShadowRecord::plain(&s.pair.1),
                        step: (&s.step).into(),
                        exact_m_squared: s.exact_m_squared.as_ref().map(Into::into),
                        brackets: s
                            .brackets
                            .iter()
                            .map(|(lo, hi)| BracketRecord {
                                lo: lo.into(),
                                hi: hi.into(),
                            })
                            .collect(),
                    })
                    .collect(),
            })
        }
    })
}
