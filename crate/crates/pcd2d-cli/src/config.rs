//! Run configuration: flag values, the optional TOML config file whose keys
//! mirror the flag names one-to-one, and the merge rule (flags win).

use std::fmt;
use std::path::{Path, PathBuf};

use pcd2d::gf::FieldOrder;
use pcd2d::scheme::DeliveryMode;
use serde::Deserialize;

use crate::HarnessError;

/// A value that may appear as a number or a string in the config file.
#[derive(Debug, Clone, Deserialize)]
#[serde(untagged)]
pub enum NumOrString {
    Num(u64),
    Str(String),
}

impl fmt::Display for NumOrString {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            NumOrString::Num(n) => write!(f, "{n}"),
            NumOrString::Str(s) => write!(f, "{s}"),
        }
    }
}

/// Config-file contents. Keys are identical to the long flag names.
#[derive(Debug, Default, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RawOptions {
    #[serde(rename = "K")]
    pub users: Option<usize>,
    #[serde(rename = "S")]
    pub selfish_count: Option<usize>,
    #[serde(rename = "N")]
    pub files: Option<usize>,
    pub t: Option<NumOrString>,
    #[serde(rename = "B")]
    pub file_size: Option<usize>,
    pub seed: Option<u64>,
    pub field: Option<NumOrString>,
    pub selfish: Option<String>,
    pub demands: Option<String>,
    pub mode: Option<String>,
    pub out: Option<PathBuf>,
    #[serde(rename = "grid-points")]
    pub grid_points: Option<usize>,
    #[serde(rename = "max-k")]
    pub max_k: Option<usize>,
}

impl RawOptions {
    pub fn load_file(path: &Path) -> Result<Self, HarnessError> {
        let text = std::fs::read_to_string(path).map_err(|e| {
            HarnessError::Validation(format!("cannot read config file {}: {e}", path.display()))
        })?;
        toml::from_str(&text).map_err(|e| {
            HarnessError::Validation(format!("cannot parse config file {}: {e}", path.display()))
        })
    }

    /// Overlays `self` (flag values) on top of `file` values; flags win.
    pub fn merged_over(self, file: RawOptions) -> RawOptions {
        RawOptions {
            users: self.users.or(file.users),
            selfish_count: self.selfish_count.or(file.selfish_count),
            files: self.files.or(file.files),
            t: self.t.or(file.t),
            file_size: self.file_size.or(file.file_size),
            seed: self.seed.or(file.seed),
            field: self.field.or(file.field),
            selfish: self.selfish.or(file.selfish),
            demands: self.demands.or(file.demands),
            mode: self.mode.or(file.mode),
            out: self.out.or(file.out),
            grid_points: self.grid_points.or(file.grid_points),
            max_k: self.max_k.or(file.max_k),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FieldChoice {
    Auto,
    Order(FieldOrder),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SelfishSpec {
    /// Explicit selfish user identities.
    Explicit(Vec<usize>),
    /// Every selfish subset of the configured size.
    AllSubsets,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum DemandSpec {
    Explicit(Vec<usize>),
    /// All N^K demand vectors.
    Exhaustive,
    /// A seeded sample of the given size.
    Random(usize),
}

fn parse_user_list(s: &str) -> Result<Vec<usize>, HarnessError> {
    s.split(',')
        .map(|p| {
            p.trim()
                .parse::<usize>()
                .map_err(|_| HarnessError::Validation(format!("bad user index `{p}` in `{s}`")))
        })
        .collect()
}

pub fn parse_field(v: &NumOrString) -> Result<FieldChoice, HarnessError> {
    match v.to_string().as_str() {
        "auto" => Ok(FieldChoice::Auto),
        "256" => Ok(FieldChoice::Order(FieldOrder::Gf256)),
        "65536" => Ok(FieldChoice::Order(FieldOrder::Gf65536)),
        other => Err(HarnessError::Validation(format!(
            "unknown field `{other}`; expected auto, 256, or 65536"
        ))),
    }
}

pub fn parse_mode(s: &str) -> Result<DeliveryMode, HarnessError> {
    match s {
        "independent" | "default" => Ok(DeliveryMode::Independent),
        "coordinated" | "reduced" => Ok(DeliveryMode::Coordinated),
        other => Err(HarnessError::Validation(format!(
            "unknown mode `{other}`; expected independent or coordinated"
        ))),
    }
}

/// Accepts a single value `2`, an inclusive range `0-3`, or a list `1,3,5`.
pub fn parse_t_values(v: &NumOrString) -> Result<Vec<usize>, HarnessError> {
    let s = v.to_string();
    let bad = |detail: &str| {
        HarnessError::Validation(format!(
            "bad t specification `{s}` ({detail}); expected e.g. 2, 0-3, or 1,3,5"
        ))
    };
    if let Some((lo, hi)) = s.split_once('-') {
        let lo: usize = lo.trim().parse().map_err(|_| bad("range start"))?;
        let hi: usize = hi.trim().parse().map_err(|_| bad("range end"))?;
        if lo > hi {
            return Err(bad("empty range"));
        }
        return Ok((lo..=hi).collect());
    }
    s.split(',')
        .map(|p| p.trim().parse::<usize>().map_err(|_| bad("list entry")))
        .collect()
}

pub fn parse_selfish(s: &str) -> Result<SelfishSpec, HarnessError> {
    if s == "all-subsets" {
        return Ok(SelfishSpec::AllSubsets);
    }
    if s.is_empty() || s == "none" {
        return Ok(SelfishSpec::Explicit(Vec::new()));
    }
    Ok(SelfishSpec::Explicit(parse_user_list(s)?))
}

pub fn parse_demands(s: &str) -> Result<DemandSpec, HarnessError> {
    if s == "exhaustive" {
        return Ok(DemandSpec::Exhaustive);
    }
    if let Some(count) = s.strip_prefix("random:") {
        let count: usize = count
            .trim()
            .parse()
            .map_err(|_| HarnessError::Validation(format!("bad random demand count in `{s}`")))?;
        if count == 0 {
            return Err(HarnessError::Validation(
                "random demand count must be positive".into(),
            ));
        }
        return Ok(DemandSpec::Random(count));
    }
    Ok(DemandSpec::Explicit(parse_user_list(s)?))
}

fn require<T>(value: Option<T>, flag: &str) -> Result<T, HarnessError> {
    value.ok_or_else(|| HarnessError::Validation(format!("missing required option --{flag}")))
}

/// Resolved configuration for `simulate`.
#[derive(Debug, Clone)]
pub struct SimulateConfig {
    pub users: usize,
    pub selfish_count: usize,
    pub files: usize,
    pub t_values: Vec<usize>,
    /// Requested file size in symbols; defaults to the subpacketization
    /// (one symbol per subfile) and is padded up to a multiple of it.
    pub file_size: Option<usize>,
    pub seed: u64,
    pub field: FieldChoice,
    pub selfish: SelfishSpec,
    pub demands: DemandSpec,
    pub mode: DeliveryMode,
}

pub fn resolve_simulate(raw: &RawOptions) -> Result<SimulateConfig, HarnessError> {
    Ok(SimulateConfig {
        users: require(raw.users, "K")?,
        selfish_count: require(raw.selfish_count, "S")?,
        files: require(raw.files, "N")?,
        t_values: parse_t_values(require(raw.t.as_ref(), "t")?)?,
        file_size: raw.file_size,
        seed: raw.seed.unwrap_or(0),
        field: raw
            .field
            .as_ref()
            .map(parse_field)
            .transpose()?
            .unwrap_or(FieldChoice::Auto),
        selfish: parse_selfish(require(raw.selfish.as_deref(), "selfish")?)?,
        demands: parse_demands(require(raw.demands.as_deref(), "demands")?)?,
        mode: raw
            .mode
            .as_deref()
            .map(parse_mode)
            .transpose()?
            .unwrap_or(DeliveryMode::Independent),
    })
}

#[derive(Debug, Clone)]
pub struct VerifyConfig {
    pub max_k: usize,
    pub seed: u64,
}

pub fn resolve_verify(raw: &RawOptions) -> Result<VerifyConfig, HarnessError> {
    let max_k = raw.max_k.unwrap_or(4);
    if !(2..=6).contains(&max_k) {
        return Err(HarnessError::Validation(format!(
            "--max-k must be in 2..=6, got {max_k} (exhaustive verification grows as K^K)"
        )));
    }
    Ok(VerifyConfig {
        max_k,
        seed: raw.seed.unwrap_or(0),
    })
}

#[derive(Debug, Clone)]
pub struct SweepConfig {
    pub users: usize,
    pub selfish_count: usize,
    pub files: usize,
    pub grid_points: usize,
}

pub fn resolve_sweep(raw: &RawOptions) -> Result<SweepConfig, HarnessError> {
    let grid_points = raw.grid_points.unwrap_or(200);
    if grid_points < 2 {
        return Err(HarnessError::Validation(
            "--grid-points must be at least 2".into(),
        ));
    }
    Ok(SweepConfig {
        users: require(raw.users, "K")?,
        selfish_count: require(raw.selfish_count, "S")?,
        files: require(raw.files, "N")?,
        grid_points,
    })
}
