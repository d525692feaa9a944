//! Sweep configuration: flat `key = value` files with dotted keys, merged
//! with command-line flags.

use crate::error::{Error, Result};
use crate::gauss::ChannelGains;
use crate::inner::Scheme;
use crate::io::{channel_from_kv, load_channel, KvFile, GAIN_KEYS};
use crate::outer::OuterBound;
use std::path::{Path, PathBuf};
use std::str::FromStr;

/// One axis of a parameter plane.
#[derive(Clone, Debug, PartialEq)]
pub struct Axis {
    pub gain: String,
    pub min: f64,
    pub max: f64,
    pub steps: usize,
}

impl Axis {
    pub fn new(gain: &str, min: f64, max: f64, steps: usize) -> Result<Self> {
        if !GAIN_KEYS.contains(&gain) {
            return Err(Error::Usage(format!(
                "plane axis '{gain}' is not a gain key (expected one of {GAIN_KEYS:?})"
            )));
        }
        if steps < 1 {
            return Err(Error::Usage(format!(
                "plane axis '{gain}': steps must be >= 1"
            )));
        }
        if !(min.is_finite() && max.is_finite()) || (steps > 1 && min >= max) {
            return Err(Error::Usage(format!(
                "plane axis '{gain}': need finite min < max, got {min}..{max}"
            )));
        }
        Ok(Self {
            gain: gain.to_string(),
            min,
            max,
            steps,
        })
    }

    pub fn values(&self) -> Vec<f64> {
        if self.steps == 1 {
            return vec![self.min];
        }
        (0..self.steps)
            .map(|i| {
                if i + 1 == self.steps {
                    self.max
                } else {
                    self.min + (self.max - self.min) * i as f64 / (self.steps - 1) as f64
                }
            })
            .collect()
    }

    /// Parses `gain=min:max:steps`.
    fn parse(s: &str) -> Result<Self> {
        let bad = || Error::Usage(format!("bad plane axis '{s}', expected gain=min:max:steps"));
        let (gain, range) = s.split_once('=').ok_or_else(bad)?;
        let parts: Vec<&str> = range.split(':').collect();
        if parts.len() != 3 {
            return Err(bad());
        }
        let num = |t: &str| t.trim().parse::<f64>().map_err(|_| bad());
        let steps = parts[2].trim().parse::<usize>().map_err(|_| bad())?;
        Axis::new(gain.trim(), num(parts[0])?, num(parts[1])?, steps)
    }
}

/// Two axes; `x` varies fastest in the output.
#[derive(Clone, Debug, PartialEq)]
pub struct Plane {
    pub x: Axis,
    pub y: Axis,
}

impl FromStr for Plane {
    type Err = Error;

    /// `h12=-10:10:101,h21=-10:10:101`.
    fn from_str(s: &str) -> Result<Self> {
        let (a, b) = s.split_once(',').ok_or_else(|| {
            Error::Usage(format!(
                "bad plane '{s}', expected two comma-separated axes"
            ))
        })?;
        let plane = Plane {
            x: Axis::parse(a)?,
            y: Axis::parse(b)?,
        };
        if plane.x.gain == plane.y.gain {
            return Err(Error::Usage(format!(
                "plane axes must differ, got '{}' twice",
                plane.x.gain
            )));
        }
        Ok(plane)
    }
}

/// Named channels and planes from the figures this tool reproduces.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Preset {
    /// Regime plane with unit direct gains and relay gains 2.
    Fig4,
    /// The same plane with every gain 1.
    Fig4Body,
    /// Unit gains with `h12 = h21 = -2`.
    Fig5,
    /// Unit gains with `h12 = -2`, `h21 = 1`.
    Fig6,
    /// Unit gains with `h12 = 0.5`, `h21 = 1`.
    Fig7,
}

impl FromStr for Preset {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        Ok(match s {
            "fig4" => Preset::Fig4,
            "fig4-body" => Preset::Fig4Body,
            "fig5" => Preset::Fig5,
            "fig6" => Preset::Fig6,
            "fig7" => Preset::Fig7,
            _ => {
                return Err(Error::Usage(format!(
                    "unknown preset '{s}' (fig4, fig4-body, fig5, fig6, fig7)"
                )))
            }
        })
    }
}

impl Preset {
    pub fn channel(&self) -> ChannelGains {
        let g = |h12: f64, h21: f64, hc: f64| {
            ChannelGains::real(1.0, h12, h21, 1.0, hc, hc).expect("preset gains are valid")
        };
        match self {
            Preset::Fig4 => g(0.0, 0.0, 2.0),
            Preset::Fig4Body => g(0.0, 0.0, 1.0),
            Preset::Fig5 => g(-2.0, -2.0, 1.0),
            Preset::Fig6 => g(-2.0, 1.0, 1.0),
            Preset::Fig7 => g(0.5, 1.0, 1.0),
        }
    }

    /// The curves of the figure: the Sato bound and the four scheme families,
    /// plus the strong-Rx2 bound on Fig 6 and also the weak-degraded bound on Fig 7.
    pub fn curves(&self) -> Vec<Selection> {
        let mut s = vec![Selection::Bound(OuterBound::Sato)];
        s.extend(Scheme::FAMILIES.iter().map(|f| Selection::Scheme(*f)));
        match self {
            Preset::Fig6 => s.push(Selection::Bound(OuterBound::StrongRx2)),
            Preset::Fig7 => s.extend([
                Selection::Bound(OuterBound::StrongRx2),
                Selection::Bound(OuterBound::WeakDegraded),
            ]),
            _ => {}
        }
        s
    }

    pub fn plane(&self) -> Plane {
        Plane {
            x: Axis::new("h12", -10.0, 10.0, 101).expect("valid axis"),
            y: Axis::new("h21", -10.0, 10.0, 101).expect("valid axis"),
        }
    }
}

/// A scheme or bound to evaluate.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Selection {
    Scheme(Scheme),
    Bound(OuterBound),
}

impl FromStr for Selection {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        if let Ok(b) = s.parse::<OuterBound>() {
            return Ok(Selection::Bound(b));
        }
        s.parse::<Scheme>()
            .map(Selection::Scheme)
            .map_err(|_| Error::Usage(format!("'{s}' is neither a scheme nor an outer bound")))
    }
}

/// Everything a command may need, after merging the config file with flags.
#[derive(Clone, Debug, Default)]
pub struct SweepConfig {
    pub channel: Option<ChannelGains>,
    pub preset: Option<Preset>,
    pub plane: Option<Plane>,
    pub select: Vec<Selection>,
    pub directions: Option<usize>,
    pub seed: Option<u64>,
    pub out: Option<PathBuf>,
    pub hc: Option<Vec<f64>>,
}

const CONFIG_KEYS: [&str; 15] = [
    "channel",
    "preset",
    "plane.x",
    "plane.x.min",
    "plane.x.max",
    "plane.x.steps",
    "plane.y",
    "plane.y.min",
    "plane.y.max",
    "plane.y.steps",
    "select",
    "directions",
    "seed",
    "out",
    "hc",
];

const POWER_KEYS: [&str; 5] = ["P1", "P2", "Pc", "s1sq", "s2sq"];

pub(crate) fn parse_list<T: FromStr<Err = Error>>(s: &str) -> Result<Vec<T>> {
    s.split(',')
        .map(str::trim)
        .filter(|t| !t.is_empty())
        .map(T::from_str)
        .collect()
}

pub(crate) fn parse_f64_list(s: &str, what: &str) -> Result<Vec<f64>> {
    s.split(',')
        .map(str::trim)
        .filter(|t| !t.is_empty())
        .map(|t| {
            t.parse::<f64>()
                .map_err(|_| Error::Usage(format!("{what}: bad number '{t}'")))
        })
        .collect()
}

impl SweepConfig {
    /// Reads a config file. Relative paths inside it resolve against its directory.
    pub fn load(path: &Path) -> Result<Self> {
        let kv = KvFile::load(path)?;
        let base = path.parent().unwrap_or(Path::new("."));
        Self::from_kv(&kv, base)
    }

    pub fn from_kv(kv: &KvFile, base: &Path) -> Result<Self> {
        let allowed: Vec<&str> = CONFIG_KEYS
            .iter()
            .chain(GAIN_KEYS.iter())
            .chain(POWER_KEYS.iter())
            .copied()
            .collect();
        kv.check_keys(&allowed)?;
        let at = |key: &str| match kv.entries.get(key) {
            Some((line, _)) => format!("{}:{line}: field '{key}'", kv.origin),
            None => format!("{}: field '{key}'", kv.origin),
        };
        let wrap = |key: &str, e: Error| Error::Usage(format!("{}: {}", at(key), strip(&e)));

        let mut cfg = SweepConfig::default();
        let inline = GAIN_KEYS
            .iter()
            .chain(POWER_KEYS.iter())
            .any(|k| kv.get(k).is_some());
        if let Some(p) = kv.get("channel") {
            if inline {
                return Err(Error::Usage(format!(
                    "{}: give either 'channel' or inline gains, not both",
                    at("channel")
                )));
            }
            cfg.channel = Some(load_channel(&base.join(p))?.gains);
        } else if inline {
            cfg.channel = Some(channel_from_kv(kv)?.gains);
        }
        if let Some(p) = kv.get("preset") {
            cfg.preset = Some(p.parse().map_err(|e| wrap("preset", e))?);
        }
        if let Some(x) = kv.get("plane.x") {
            let axis = |name: &str, gain: &str| -> Result<Axis> {
                let num = |k: &str| -> Result<f64> {
                    kv.real(&format!("plane.{name}.{k}"))?.ok_or_else(|| {
                        Error::Usage(format!("{}: missing key 'plane.{name}.{k}'", kv.origin))
                    })
                };
                let steps = kv.usize(&format!("plane.{name}.steps"))?.ok_or_else(|| {
                    Error::Usage(format!("{}: missing key 'plane.{name}.steps'", kv.origin))
                })?;
                Axis::new(gain, num("min")?, num("max")?, steps)
                    .map_err(|e| wrap(&format!("plane.{name}"), e))
            };
            let y = kv
                .get("plane.y")
                .ok_or_else(|| Error::Usage(format!("{}: 'plane.x' needs 'plane.y'", kv.origin)))?;
            cfg.plane = Some(Plane {
                x: axis("x", x)?,
                y: axis("y", y)?,
            });
        }
        if let Some(s) = kv.get("select") {
            cfg.select = parse_list(s).map_err(|e| wrap("select", e))?;
            if cfg.select.is_empty() {
                return Err(Error::Usage(format!(
                    "{}: selection is empty",
                    at("select")
                )));
            }
        }
        cfg.directions = kv.usize("directions")?;
        cfg.seed = kv.usize("seed")?.map(|s| s as u64);
        cfg.out = kv.get("out").map(|p| base.join(p));
        if let Some(s) = kv.get("hc") {
            cfg.hc = Some(parse_f64_list(s, &at("hc"))?);
        }
        Ok(cfg)
    }
}

fn strip(e: &Error) -> String {
    match e {
        Error::Usage(m) | Error::Domain(m) => m.clone(),
        other => other.to_string(),
    }
}
