//! Run configuration: defaults, `key=value` config file, `TTHUE_BITS`
//! environment override, and command-line overrides, in that order of
//! increasing precedence (the environment variable only replaces the
//! *default* starting precision; an explicit config key or flag wins).

use std::path::PathBuf;

use num_bigint::BigInt;
use num_rational::Ratio;
use num_traits::{Signed, Zero};
use tthue::bounds::BoundConstants;
use tthue::precision::PrecisionPolicy;

/// Fully resolved settings of one invocation.
#[derive(Debug, Clone)]
pub struct RunConfig {
    pub bits: u32,
    /// True once a config key or flag pinned `bits`; blocks the
    /// environment fallback.
    pub bits_explicit: bool,
    pub max_bits: u32,
    pub epsilon: Option<Ratio<BigInt>>,
    pub consts: BoundConstants,
    pub output: Option<PathBuf>,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            bits: 128,
            bits_explicit: false,
            max_bits: 16384,
            epsilon: None,
            consts: BoundConstants::default(),
            output: None,
        }
    }
}

impl RunConfig {
    pub fn policy(&self) -> Result<PrecisionPolicy, String> {
        if self.bits == 0 || self.max_bits < self.bits {
            return Err(format!(
                "invalid precision settings: bits = {}, max bits = {}",
                self.bits, self.max_bits
            ));
        }
        Ok(PrecisionPolicy::with_bits(self.bits, self.max_bits))
    }

    /// Applies one `key = value` pair from the config file.
    fn apply(&mut self, key: &str, value: &str) -> Result<(), String> {
        match key {
            "bits" => {
                self.bits = parse_u32(value)?;
                self.bits_explicit = true;
            }
            "max_bits" => self.max_bits = parse_u32(value)?,
            "epsilon" => self.epsilon = Some(parse_positive_ratio(value)?),
            "c2" => self.consts.c2 = parse_positive_ratio(value)?,
            "c3" => self.consts.c3 = parse_positive_ratio(value)?,
            "c4" => self.consts.c4 = parse_positive_ratio(value)?,
            "c5" => self.consts.c5 = parse_positive_ratio(value)?,
            "c_cu" => self.consts.c_cu = parse_positive_ratio(value)?,
            "output" => self.output = Some(PathBuf::from(value)),
            other => return Err(format!("unknown config key {other:?}")),
        }
        Ok(())
    }

    /// Loads the file at `path` over the current settings.
    pub fn load_file(&mut self, path: &std::path::Path) -> Result<(), String> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| format!("cannot read config {}: {e}", path.display()))?;
        for (lineno, raw) in text.lines().enumerate() {
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let (key, value) = line.split_once('=').ok_or_else(|| {
                format!("{}:{}: expected key=value, got {raw:?}", path.display(), lineno + 1)
            })?;
            self.apply(key.trim(), value.trim())
                .map_err(|e| format!("{}:{}: {e}", path.display(), lineno + 1))?;
        }
        Ok(())
    }

    /// Applies `TTHUE_BITS` unless a config key or flag already pinned the
    /// starting precision.
    pub fn apply_env(&mut self) -> Result<(), String> {
        if self.bits_explicit {
            return Ok(());
        }
        match std::env::var("TTHUE_BITS") {
            Ok(v) => {
                let bits = parse_u32(&v).map_err(|e| format!("TTHUE_BITS: {e}"))?;
                if bits == 0 {
                    return Err("TTHUE_BITS: must be positive".into());
                }
                self.bits = bits;
                Ok(())
            }
            Err(std::env::VarError::NotPresent) => Ok(()),
            Err(e) => Err(format!("TTHUE_BITS: {e}")),
        }
    }
}

fn parse_u32(s: &str) -> Result<u32, String> {
    s.trim().parse::<u32>().map_err(|e| format!("invalid integer {s:?}: {e}"))
}

/// Parses an exact rational from `p/q` or plain-integer text. Never goes
/// through floating point.
pub fn parse_ratio(s: &str) -> Result<Ratio<BigInt>, String> {
    let s = s.trim();
    let (num, den) = match s.split_once('/') {
        Some((p, q)) => (p.trim(), q.trim()),
        None => (s, "1"),
    };
    let p: BigInt = num.parse().map_err(|e| format!("invalid numerator in {s:?}: {e}"))?;
    let q: BigInt = den.parse().map_err(|e| format!("invalid denominator in {s:?}: {e}"))?;
    if q.is_zero() {
        return Err(format!("zero denominator in {s:?}"));
    }
    Ok(Ratio::new(p, q))
}

pub fn parse_positive_ratio(s: &str) -> Result<Ratio<BigInt>, String> {
    let r = parse_ratio(s)?;
    if !r.is_positive() {
        return Err(format!("{s:?} must be positive"));
    }
    Ok(r)
}

pub fn parse_bigint(s: &str) -> Result<BigInt, String> {
    s.trim().parse().map_err(|e| format!("invalid integer {s:?}: {e}"))
}
