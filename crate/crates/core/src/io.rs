//! Text formats: numbers, flat key-value files and channel descriptions.

use crate::error::{Error, Result};
use crate::gauss::{to_standard_form_with_map, ChannelGains, GeneralChannel, StandardFormMap};
use num_complex::Complex64;
use std::collections::BTreeMap;
use std::path::Path;

/// Formats like C's `%.12g`.
pub fn fmt_num(x: f64) -> String {
    if x == 0.0 {
        return "0".into();
    }
    if !x.is_finite() {
        return format!("{x}");
    }
    let sci = format!("{:.11e}", x);
    let (mant, exp) = sci.split_once('e').expect("exponent");
    let exp: i32 = exp.parse().expect("exponent");
    if (-5..12).contains(&exp) {
        let decimals = (11 - exp).max(0) as usize;
        trim_zeros(format!("{:.*}", decimals, x))
    } else {
        let mant = trim_zeros(mant.to_string());
        format!("{mant}e{}{:02}", if exp < 0 { '-' } else { '+' }, exp.abs())
    }
}

fn trim_zeros(s: String) -> String {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.').to_string()
    } else {
        s
    }
}

/// Parses `"a+bi"`, `"a-bi"`, `"bi"`, `"i"` or a bare real.
pub fn parse_complex(s: &str) -> Result<Complex64> {
    let t: String = s.chars().filter(|c| !c.is_whitespace()).collect();
    let bad = || Error::Usage(format!("cannot parse complex number '{s}'"));
    if t.is_empty() {
        return Err(bad());
    }
    if let Some(body) = t.strip_suffix(['i', 'j']) {
        // Split at the last sign that is not part of an exponent.
        let bytes = body.as_bytes();
        let mut split = None;
        for k in (1..bytes.len()).rev() {
            if (bytes[k] == b'+' || bytes[k] == b'-') && !matches!(bytes[k - 1], b'e' | b'E') {
                split = Some(k);
                break;
            }
        }
        let imag = |p: &str| -> Result<f64> {
            match p {
                "" | "+" => Ok(1.0),
                "-" => Ok(-1.0),
                _ => p.parse::<f64>().map_err(|_| bad()),
            }
        };
        return match split {
            Some(k) => Ok(Complex64::new(
                body[..k].parse::<f64>().map_err(|_| bad())?,
                imag(&body[k..])?,
            )),
            None => Ok(Complex64::new(0.0, imag(body)?)),
        };
    }
    Ok(Complex64::new(t.parse::<f64>().map_err(|_| bad())?, 0.0))
}

/// A parsed `key = value` file: values keyed by name, with line numbers kept
/// for diagnostics.
#[derive(Clone, Debug, Default)]
pub struct KvFile {
    pub entries: BTreeMap<String, (usize, String)>,
    pub origin: String,
}

impl KvFile {
    /// Blank lines and lines starting with `#` are ignored; duplicate keys are errors.
    pub fn parse(text: &str, origin: &str) -> Result<Self> {
        let mut entries = BTreeMap::new();
        for (i, raw) in text.lines().enumerate() {
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let (k, v) = line.split_once('=').ok_or_else(|| {
                Error::Usage(format!(
                    "{origin}:{}: expected 'key = value', got '{line}'",
                    i + 1
                ))
            })?;
            let k = k.trim().to_string();
            if k.is_empty() {
                return Err(Error::Usage(format!("{origin}:{}: empty key", i + 1)));
            }
            if entries
                .insert(k.clone(), (i + 1, v.trim().to_string()))
                .is_some()
            {
                return Err(Error::Usage(format!(
                    "{origin}:{}: duplicate key '{k}'",
                    i + 1
                )));
            }
        }
        Ok(Self {
            entries,
            origin: origin.to_string(),
        })
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::Usage(format!("cannot read {}: {e}", path.display())))?;
        Self::parse(&text, &path.display().to_string())
    }

    pub fn get(&self, key: &str) -> Option<&str> {
        self.entries.get(key).map(|(_, v)| v.as_str())
    }

    fn where_(&self, key: &str) -> String {
        match self.entries.get(key) {
            Some((line, _)) => format!("{}:{line}", self.origin),
            None => self.origin.clone(),
        }
    }

    pub fn complex(&self, key: &str) -> Result<Option<Complex64>> {
        self.get(key)
            .map(|v| {
                parse_complex(v)
                    .map_err(|e| Error::Usage(format!("{}: field '{key}': {e}", self.where_(key))))
            })
            .transpose()
    }

    pub fn real(&self, key: &str) -> Result<Option<f64>> {
        self.get(key)
            .map(|v| {
                v.parse::<f64>().map_err(|_| {
                    Error::Usage(format!(
                        "{}: field '{key}': expected a number, got '{v}'",
                        self.where_(key)
                    ))
                })
            })
            .transpose()
    }

    pub fn usize(&self, key: &str) -> Result<Option<usize>> {
        self.get(key)
            .map(|v| {
                v.parse::<usize>().map_err(|_| {
                    Error::Usage(format!(
                        "{}: field '{key}': expected a nonnegative integer, got '{v}'",
                        self.where_(key)
                    ))
                })
            })
            .transpose()
    }

    /// Rejects keys outside `allowed`.
    pub fn check_keys(&self, allowed: &[&str]) -> Result<()> {
        for (k, (line, _)) in &self.entries {
            if !allowed.contains(&k.as_str()) {
                return Err(Error::Usage(format!(
                    "{}:{line}: unknown key '{k}'",
                    self.origin
                )));
            }
        }
        Ok(())
    }
}

pub const GAIN_KEYS: [&str; 6] = ["h11", "h12", "h21", "h22", "h1c", "h2c"];
const POWER_KEYS: [&str; 5] = ["P1", "P2", "Pc", "s1sq", "s2sq"];

/// A channel read from a file: the standard form used for computation and,
/// when the file described a general channel, that channel and the input
/// rotation relating the two.
#[derive(Clone, Debug, PartialEq)]
pub struct ChannelSpec {
    pub gains: ChannelGains,
    pub general: Option<(GeneralChannel, StandardFormMap)>,
}

/// Builds a channel from key-value entries. Any power or noise key, or a
/// direct/relay gain that is not real and nonnegative, makes the entries a
/// general channel that is converted to standard form.
pub fn channel_from_kv(kv: &KvFile) -> Result<ChannelSpec> {
    let mut g = [Complex64::new(0.0, 0.0); 6];
    for (slot, key) in g.iter_mut().zip(GAIN_KEYS) {
        *slot = kv
            .complex(key)?
            .ok_or_else(|| Error::Usage(format!("{}: missing gain '{key}'", kv.origin)))?;
    }
    let [h11, h12, h21, h22, h1c, h2c] = g;
    let nonstd = [h11, h22, h1c, h2c]
        .iter()
        .any(|z| z.im != 0.0 || z.re < 0.0);
    let has_power = POWER_KEYS.iter().any(|k| kv.get(k).is_some());
    if !has_power && !nonstd {
        let gains = ChannelGains::new(h11.re, h12, h21, h22.re, h1c.re, h2c.re)
            .map_err(|e| Error::Usage(format!("{}: {e}", kv.origin)))?;
        return Ok(ChannelSpec {
            gains,
            general: None,
        });
    }
    let p = |k: &str| -> Result<f64> { Ok(kv.real(k)?.unwrap_or(1.0)) };
    let ch = GeneralChannel {
        g11: h11,
        g12: h12,
        g21: h21,
        g22: h22,
        g1c: h1c,
        g2c: h2c,
        p1: p("P1")?,
        p2: p("P2")?,
        pc: p("Pc")?,
        s1sq: p("s1sq")?,
        s2sq: p("s2sq")?,
    };
    let (gains, map) = to_standard_form_with_map(&ch)?;
    Ok(ChannelSpec {
        gains,
        general: Some((ch, map)),
    })
}

pub fn load_channel(path: &Path) -> Result<ChannelSpec> {
    let kv = KvFile::load(path)?;
    let allowed: Vec<&str> = GAIN_KEYS.iter().chain(POWER_KEYS.iter()).copied().collect();
    kv.check_keys(&allowed)?;
    channel_from_kv(&kv)
}

/// Writes gains in the channel-file format.
pub fn format_channel(g: &ChannelGains) -> String {
    let c = |z: Complex64| {
        if z.im == 0.0 {
            fmt_num(z.re)
        } else {
            format!(
                "{}{}{}i",
                fmt_num(z.re),
                if z.im < 0.0 { "-" } else { "+" },
                fmt_num(z.im.abs())
            )
        }
    };
    format!(
        "h11 = {}\nh12 = {}\nh21 = {}\nh22 = {}\nh1c = {}\nh2c = {}\n",
        fmt_num(g.h11),
        c(g.h12),
        c(g.h21),
        fmt_num(g.h22),
        fmt_num(g.h1c),
        fmt_num(g.h2c)
    )
}
