//! Suite configuration: defaults, a plain `key = value` file, the seed variable, then flags.

use std::fmt;
use std::path::PathBuf;
use std::str::FromStr;

use super::suites::Suite;
use super::HarnessError;

/// Environment variable read for the seed when no flag sets it.
pub const SEED_ENV: &str = "DUALGPD_SEED";
pub const DEFAULT_SEED: u64 = 7;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct DimRange {
    pub min: usize,
    pub max: usize,
}

impl DimRange {
    pub fn new(min: usize, max: usize) -> Self {
        DimRange { min, max }
    }

    pub fn iter(&self) -> impl Iterator<Item = usize> {
        self.min..=self.max
    }
}

impl fmt::Display for DimRange {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.min == self.max {
            write!(f, "{}", self.max)
        } else {
            write!(f, "{}..{}", self.min, self.max)
        }
    }
}

/// `N` (meaning the suite minimum up to `N`) or `A..B`.
impl FromStr for DimRange {
    type Err = HarnessError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let bad = || HarnessError::InvalidConfig(format!("dims: expected N or A..B, got {s:?}"));
        let num = |t: &str| t.trim().parse::<usize>().map_err(|_| bad());
        match s.split_once("..") {
            Some((a, b)) => {
                let (a, b) = (num(a)?, num(b)?);
                if a > b {
                    return Err(bad());
                }
                Ok(DimRange::new(a, b))
            }
            None => Ok(DimRange::new(usize::MAX, num(s)?)),
        }
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, clap::ValueEnum)]
pub enum OutputFormat {
    #[default]
    Text,
    Json,
}

impl FromStr for OutputFormat {
    type Err = HarnessError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.trim() {
            "text" => Ok(OutputFormat::Text),
            "json" => Ok(OutputFormat::Json),
            other => Err(HarnessError::InvalidConfig(format!("format: expected text or json, got {other:?}"))),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SuiteConfig {
    pub suite: Suite,
    pub dims: DimRange,
    pub trials: usize,
    pub seed: u64,
    pub format: OutputFormat,
    pub golden: Option<PathBuf>,
    /// Runs the suite's fault fixture instead of the clean instance.
    pub inject_fault: bool,
}

/// Values read from a config file or flags; unset fields keep the lower layer.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct ConfigOverrides {
    pub dims: Option<DimRange>,
    pub trials: Option<usize>,
    pub seed: Option<u64>,
    pub format: Option<OutputFormat>,
    pub golden: Option<PathBuf>,
    pub inject_fault: Option<bool>,
}

impl ConfigOverrides {
    /// Parses `key = value` lines; `#` starts a comment.
    pub fn parse(text: &str) -> Result<Self, HarnessError> {
        let mut out = ConfigOverrides::default();
        for (no, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (key, value) = line
                .split_once('=')
                .ok_or_else(|| HarnessError::InvalidConfig(format!("line {}: expected key = value", no + 1)))?;
            let value = value.trim();
            let num = |what: &str| value.parse::<u64>().map_err(|_| HarnessError::InvalidConfig(format!("{what}: not an integer: {value:?}")));
            match key.trim() {
                "dims" => out.dims = Some(value.parse()?),
                "trials" => out.trials = Some(num("trials")? as usize),
                "seed" => out.seed = Some(num("seed")?),
                "format" => out.format = Some(value.parse()?),
                "golden" => out.golden = Some(PathBuf::from(value)),
                "inject_fault" => {
                    out.inject_fault = Some(value.parse().map_err(|_| HarnessError::InvalidConfig(format!("inject_fault: {value:?}")))?)
                }
                other => return Err(HarnessError::InvalidConfig(format!("line {}: unknown key {other:?}", no + 1))),
            }
        }
        Ok(out)
    }

    pub fn from_file(path: &std::path::Path) -> Result<Self, HarnessError> {
        let text = std::fs::read_to_string(path).map_err(|e| HarnessError::Io(format!("{}: {e}", path.display())))?;
        Self::parse(&text)
    }

    /// The seed from [`SEED_ENV`], if set.
    pub fn from_env() -> Result<Self, HarnessError> {
        match std::env::var(SEED_ENV) {
            Ok(v) => {
                let seed = v.trim().parse().map_err(|_| HarnessError::InvalidConfig(format!("{SEED_ENV}: not an integer: {v:?}")))?;
                Ok(ConfigOverrides { seed: Some(seed), ..Default::default() })
            }
            Err(_) => Ok(ConfigOverrides::default()),
        }
    }

    pub fn over(self, lower: ConfigOverrides) -> ConfigOverrides {
        ConfigOverrides {
            dims: self.dims.or(lower.dims),
            trials: self.trials.or(lower.trials),
            seed: self.seed.or(lower.seed),
            format: self.format.or(lower.format),
            golden: self.golden.or(lower.golden),
            inject_fault: self.inject_fault.or(lower.inject_fault),
        }
    }
}

impl SuiteConfig {
    pub fn defaults(suite: Suite) -> Self {
        let d = suite.descriptor();
        SuiteConfig {
            suite,
            dims: d.default_dims,
            trials: d.default_trials,
            seed: DEFAULT_SEED,
            format: OutputFormat::Text,
            golden: None,
            inject_fault: false,
        }
    }

    /// Defaults with `o` applied, then checked against the limits of the suite.
    pub fn resolve(suite: Suite, o: ConfigOverrides) -> Result<Self, HarnessError> {
        let mut c = SuiteConfig::defaults(suite);
        if let Some(mut dims) = o.dims {
            if dims.min == usize::MAX {
                dims.min = c.dims.min.min(dims.max);
            }
            c.dims = dims;
        }
        c.trials = o.trials.unwrap_or(c.trials);
        c.seed = o.seed.unwrap_or(c.seed);
        c.format = o.format.unwrap_or(c.format);
        c.golden = o.golden;
        c.inject_fault = o.inject_fault.unwrap_or(false);
        c.validate()?;
        Ok(c)
    }

    pub fn validate(&self) -> Result<(), HarnessError> {
        let d = self.suite.descriptor();
        if self.dims.min < d.dim_limits.min || self.dims.max > d.dim_limits.max {
            return Err(HarnessError::InvalidConfig(format!(
                "{}: dims {} outside the supported range {}",
                d.name, self.dims, d.dim_limits
            )));
        }
        if self.trials == 0 {
            return Err(HarnessError::InvalidConfig(format!("{}: trials must be positive", d.name)));
        }
        if self.inject_fault && !d.has_fault_fixture {
            return Err(HarnessError::InvalidConfig(format!("{}: no fault fixture", d.name)));
        }
        Ok(())
    }
}
