//! The rate-split inner bound for one fixed input distribution.
//!
//! Each source message is split four ways: a common part `c` decoded at both
//! destinations, a private part `p`, a part `cb` carried by the relay's common
//! codeword `U0cb`, and a part `pb` carried by the relay's private codeword
//! `U_ipb`. Primed rates are binning rates spent by the relay. Given the
//! mutual-information values of one distribution, the achievable `(R1, R2)`
//! set is the projection of an 11-dimensional polytope, computed here by
//! linear programming.

use super::{maximize, Cmp, Constraint, LpStatus};
use crate::error::{Error, Result};
use crate::io::{fmt_num, KvFile};
use crate::regions::{directions, Frontier, RatePoint, Support, Witness};
use serde::Serialize;
use std::fmt::Write as _;

/// Sub-rate indices, in storage order.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum SubRate {
    R1c = 0,
    R2c,
    R1p,
    R2p,
    R1cb,
    R2cb,
    R1pb,
    R2pb,
    R0cbBin,
    R1pbBin,
    R2pbBin,
}

impl SubRate {
    pub const ALL: [SubRate; 11] = [
        SubRate::R1c,
        SubRate::R2c,
        SubRate::R1p,
        SubRate::R2p,
        SubRate::R1cb,
        SubRate::R2cb,
        SubRate::R1pb,
        SubRate::R2pb,
        SubRate::R0cbBin,
        SubRate::R1pbBin,
        SubRate::R2pbBin,
    ];

    pub fn name(&self) -> &'static str {
        [
            "R1c", "R2c", "R1p", "R2p", "R1cb", "R2cb", "R1pb", "R2pb", "R0cb'", "R1pb'", "R2pb'",
        ][*self as usize]
    }

    /// The same role for the other user.
    pub fn swap(&self) -> SubRate {
        use SubRate::*;
        match self {
            R1c => R2c,
            R2c => R1c,
            R1p => R2p,
            R2p => R1p,
            R1cb => R2cb,
            R2cb => R1cb,
            R1pb => R2pb,
            R2pb => R1pb,
            R0cbBin => R0cbBin,
            R1pbBin => R2pbBin,
            R2pbBin => R1pbBin,
        }
    }

    fn parse(s: &str) -> Result<Self> {
        SubRate::ALL
            .iter()
            .copied()
            .find(|r| r.name() == s)
            .ok_or_else(|| Error::Usage(format!("unknown sub-rate '{s}'")))
    }
}

/// A full sub-rate vector.
#[derive(Clone, Copy, Debug, Default, PartialEq, Serialize)]
pub struct SubRateVector(pub [f64; 11]);

impl SubRateVector {
    pub fn get(&self, r: SubRate) -> f64 {
        self.0[r as usize]
    }

    pub fn r1(&self) -> f64 {
        use SubRate::*;
        self.get(R1c) + self.get(R1p) + self.get(R1cb) + self.get(R1pb)
    }

    pub fn r2(&self) -> f64 {
        use SubRate::*;
        self.get(R2c) + self.get(R2p) + self.get(R2cb) + self.get(R2pb)
    }

    pub fn point(&self) -> RatePoint {
        RatePoint::new(self.r1(), self.r2())
    }
}

/// The eight decoding bounds at a destination, written for destination 1
/// (`own` = 1, `cross` = 2). Each bounds a sum of sub-rates whose error
/// event it controls.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum DecodeBound {
    /// `R1c + R1p + R2c + L0cb + L1pb`
    CommonPrivateCross,
    /// `R1c + R1p + L0cb + L1pb`
    CommonPrivate,
    /// `R1p + R2c + L0cb + L1pb`
    PrivateCross,
    /// `R1p + L0cb + L1pb`
    Private,
    /// `R2c + L0cb + L1pb`
    Cross,
    /// `L0cb + L1pb`
    RelayCommon,
    /// `R1p + L1pb`
    PrivateRelay,
    /// `L1pb`
    RelayPrivate,
}

struct BoundShape {
    own_c: bool,
    own_p: bool,
    cross_c: bool,
    l0: bool,
    /// Whether the `I(U0cb; X_own | U1c, U2c)` offset is added to the budget.
    offset: bool,
    /// Own sub-rates whose pinning to zero lets the bound be dropped.
    drop_if_pinned: &'static [SubRate],
}

impl DecodeBound {
    pub const ALL: [DecodeBound; 8] = [
        DecodeBound::CommonPrivateCross,
        DecodeBound::CommonPrivate,
        DecodeBound::PrivateCross,
        DecodeBound::Private,
        DecodeBound::Cross,
        DecodeBound::RelayCommon,
        DecodeBound::PrivateRelay,
        DecodeBound::RelayPrivate,
    ];

    pub fn key(&self) -> &'static str {
        match self {
            DecodeBound::CommonPrivateCross => "c_p_x",
            DecodeBound::CommonPrivate => "c_p",
            DecodeBound::PrivateCross => "p_x",
            DecodeBound::Private => "p",
            DecodeBound::Cross => "x",
            DecodeBound::RelayCommon => "cb",
            DecodeBound::PrivateRelay => "p_pb",
            DecodeBound::RelayPrivate => "pb",
        }
    }

    fn parse(s: &str) -> Result<Self> {
        DecodeBound::ALL
            .iter()
            .copied()
            .find(|b| b.key() == s)
            .ok_or_else(|| Error::Usage(format!("unknown decoding bound '{s}'")))
    }

    fn shape(&self) -> BoundShape {
        use SubRate::*;
        const ALL_OWN: &[SubRate] = &[R1c, R1p, R1cb, R1pb];
        const P_CB_PB: &[SubRate] = &[R1p, R1cb, R1pb];
        const CB_PB: &[SubRate] = &[R1cb, R1pb];
        let s = |own_c, own_p, cross_c, l0, offset, drop_if_pinned| BoundShape {
            own_c,
            own_p,
            cross_c,
            l0,
            offset,
            drop_if_pinned,
        };
        match self {
            DecodeBound::CommonPrivateCross => s(true, true, true, true, true, ALL_OWN),
            DecodeBound::CommonPrivate => s(true, true, false, true, true, ALL_OWN),
            DecodeBound::PrivateCross => s(false, true, true, true, true, P_CB_PB),
            DecodeBound::Private => s(false, true, false, true, true, P_CB_PB),
            DecodeBound::Cross => s(false, false, true, true, true, CB_PB),
            DecodeBound::RelayCommon => s(false, false, false, true, true, CB_PB),
            DecodeBound::PrivateRelay => s(false, true, false, false, true, &[R1p, R1pb]),
            DecodeBound::RelayPrivate => s(false, false, false, false, false, &[R1pb]),
        }
    }
}

/// Which sub-rates are structurally zero and which droppable bounds a scheme
/// keeps anyway.
#[derive(Clone, Debug, PartialEq)]
pub struct SchemeMask {
    pub pinned: [bool; 11],
    /// `keep[d][k]`: keep bound `k` at destination `d` even when its drop rule applies.
    pub keep: [[bool; 8]; 2],
    /// When false no bound is ever dropped.
    pub apply_drops: bool,
}

impl Default for SchemeMask {
    fn default() -> Self {
        Self::FULL
    }
}

impl SchemeMask {
    /// Every sub-rate free.
    pub const FULL: SchemeMask = SchemeMask {
        pinned: [false; 11],
        keep: [[false; 8]; 2],
        apply_drops: true,
    };

    /// Mask with exactly `zero` pinned.
    pub fn pinning(zero: &[SubRate]) -> Self {
        let mut m = Self::FULL;
        for r in zero {
            m.pinned[*r as usize] = true;
        }
        m
    }

    pub fn is_pinned(&self, r: SubRate) -> bool {
        self.pinned[r as usize]
    }

    pub fn keeping(mut self, dest: usize, b: DecodeBound) -> Self {
        self.keep[dest][b as usize] = true;
        self
    }

    pub fn without_drops(mut self) -> Self {
        self.apply_drops = false;
        self
    }

    /// Whether bound `b` at destination `dest` (0 or 1) is removed.
    pub fn dropped(&self, dest: usize, b: DecodeBound) -> bool {
        if !self.apply_drops || self.keep[dest][b as usize] {
            return false;
        }
        b.shape()
            .drop_if_pinned
            .iter()
            .all(|r| self.is_pinned(mirror(*r, dest)))
    }
}

fn mirror(r: SubRate, dest: usize) -> SubRate {
    if dest == 0 {
        r
    } else {
        r.swap()
    }
}

/// Decoding-side values at one destination.
#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct DecodeTerms {
    /// `I(U0cb; X_own | U1c, U2c)`.
    pub offset: f64,
    /// Right-hand mutual informations, indexed like [`DecodeBound::ALL`].
    pub bounds: [f64; 8],
}

impl DecodeTerms {
    /// Budget of bound `b`, offset included where it applies.
    pub fn budget(&self, b: DecodeBound) -> f64 {
        let v = self.bounds[b as usize];
        if b.shape().offset {
            v + self.offset
        } else {
            v
        }
    }
}

/// Mutual-information values feeding the rate-split polytope.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct MITerms {
    /// Lower bounds on `R0cb'`, `R1pb'`, `R2pb'` and `R1pb' + R2pb'`.
    pub binning: [f64; 4],
    /// Destination 1, then destination 2 (index-swapped roles).
    pub dest: [DecodeTerms; 2],
    pub mask: SchemeMask,
}

const BIN_KEYS: [&str; 4] = ["bin.0cb", "bin.1pb", "bin.2pb", "bin.sum"];

impl MITerms {
    pub fn validate(&self) -> Result<()> {
        let vals = self.binning.iter().chain(
            self.dest
                .iter()
                .flat_map(|d| std::iter::once(&d.offset).chain(&d.bounds)),
        );
        for v in vals {
            if !v.is_finite() || *v < 0.0 {
                return Err(Error::Domain(format!(
                    "mutual-information terms must be finite and nonnegative, got {v}"
                )));
            }
        }
        Ok(())
    }

    /// Every value as a flat `key = value` list.
    pub fn to_kv(&self) -> String {
        let mut s = String::new();
        for (k, v) in BIN_KEYS.iter().zip(&self.binning) {
            let _ = writeln!(s, "{k} = {}", fmt_num(*v));
        }
        for (d, t) in self.dest.iter().enumerate() {
            let _ = writeln!(s, "d{}.offset = {}", d + 1, fmt_num(t.offset));
            for b in DecodeBound::ALL {
                let _ = writeln!(
                    s,
                    "d{}.{} = {}",
                    d + 1,
                    b.key(),
                    fmt_num(t.bounds[b as usize])
                );
            }
        }
        let pinned: Vec<&str> = SubRate::ALL
            .iter()
            .filter(|r| self.mask.is_pinned(**r))
            .map(|r| r.name())
            .collect();
        let _ = writeln!(s, "mask.pinned = {}", pinned.join(","));
        let mut keep = Vec::new();
        for d in 0..2 {
            for b in DecodeBound::ALL {
                if self.mask.keep[d][b as usize] {
                    keep.push(format!("d{}.{}", d + 1, b.key()));
                }
            }
        }
        let _ = writeln!(s, "mask.keep = {}", keep.join(","));
        let _ = writeln!(s, "mask.drops = {}", self.mask.apply_drops);
        s
    }

    /// Inverse of [`MITerms::to_kv`]. Missing values default to 0.
    pub fn from_kv(kv: &KvFile) -> Result<Self> {
        let mut allowed: Vec<String> = BIN_KEYS.iter().map(|s| s.to_string()).collect();
        for d in 1..=2 {
            allowed.push(format!("d{d}.offset"));
            allowed.extend(DecodeBound::ALL.iter().map(|b| format!("d{d}.{}", b.key())));
        }
        allowed.extend(["mask.pinned", "mask.keep", "mask.drops"].map(String::from));
        kv.check_keys(&allowed.iter().map(|s| s.as_str()).collect::<Vec<_>>())?;

        let mut mi = MITerms::default();
        for (slot, k) in mi.binning.iter_mut().zip(BIN_KEYS) {
            *slot = kv.real(k)?.unwrap_or(0.0);
        }
        for d in 0..2 {
            mi.dest[d].offset = kv.real(&format!("d{}.offset", d + 1))?.unwrap_or(0.0);
            for b in DecodeBound::ALL {
                mi.dest[d].bounds[b as usize] =
                    kv.real(&format!("d{}.{}", d + 1, b.key()))?.unwrap_or(0.0);
            }
        }
        let list = |k: &str| -> Vec<String> {
            kv.get(k)
                .map(|v| {
                    v.split(',')
                        .map(|s| s.trim().to_string())
                        .filter(|s| !s.is_empty())
                        .collect()
                })
                .unwrap_or_default()
        };
        for name in list("mask.pinned") {
            mi.mask.pinned[SubRate::parse(&name)? as usize] = true;
        }
        for item in list("mask.keep") {
            let (d, b) = item.split_once('.').ok_or_else(|| {
                Error::Usage(format!("{}: bad mask.keep entry '{item}'", kv.origin))
            })?;
            let d = match d {
                "d1" => 0,
                "d2" => 1,
                _ => {
                    return Err(Error::Usage(format!(
                        "{}: bad destination '{d}'",
                        kv.origin
                    )))
                }
            };
            mi.mask.keep[d][DecodeBound::parse(b)? as usize] = true;
        }
        if let Some(v) = kv.get("mask.drops") {
            mi.mask.apply_drops = v.parse().map_err(|_| {
                Error::Usage(format!("{}: mask.drops must be true or false", kv.origin))
            })?;
        }
        mi.validate()?;
        Ok(mi)
    }
}

/// Disables the relay's common codeword: its binning rate, its offsets and
/// the sub-rates it carries are zeroed.
pub fn jiang_mask(mi: &MITerms) -> MITerms {
    let mut out = mi.clone();
    out.binning[0] = 0.0;
    for d in &mut out.dest {
        d.offset = 0.0;
    }
    for r in [SubRate::R0cbBin, SubRate::R1cb, SubRate::R2cb] {
        out.mask.pinned[r as usize] = true;
    }
    out
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum ProjectionStatus {
    Optimal,
    /// No sub-rate vector meets the binning requirements and the decoding
    /// budgets at once.
    Empty,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Projection {
    pub value: f64,
    pub rates: SubRateVector,
    pub status: ProjectionStatus,
    /// For an empty region, the least total constraint violation.
    pub infeasibility: f64,
}

/// Constraints in terms of the unpinned sub-rates. Returns the column map too.
fn build(mi: &MITerms) -> (Vec<SubRate>, Vec<Constraint>) {
    let cols: Vec<SubRate> = SubRate::ALL
        .iter()
        .copied()
        .filter(|r| !mi.mask.is_pinned(*r))
        .collect();
    let row = |terms: &[SubRate]| -> Vec<f64> {
        cols.iter()
            .map(|c| terms.iter().filter(|t| *t == c).count() as f64)
            .collect()
    };
    let mut cons = Vec::new();

    use SubRate::*;
    let bins: [&[SubRate]; 4] = [&[R0cbBin], &[R1pbBin], &[R2pbBin], &[R1pbBin, R2pbBin]];
    for (terms, b) in bins.iter().zip(&mi.binning) {
        cons.push(Constraint::new(row(terms), Cmp::Ge, *b));
    }

    for d in 0..2 {
        let m = |r: SubRate| mirror(r, d);
        for b in DecodeBound::ALL {
            if mi.mask.dropped(d, b) {
                continue;
            }
            let sh = b.shape();
            let mut terms = vec![m(R1pb), m(R1pbBin)];
            if sh.own_c {
                terms.push(m(R1c));
            }
            if sh.own_p {
                terms.push(m(R1p));
            }
            if sh.cross_c {
                terms.push(m(R2c));
            }
            if sh.l0 {
                terms.extend([R1cb, R2cb, R0cbBin]);
            }
            cons.push(Constraint::new(row(&terms), Cmp::Le, mi.dest[d].budget(b)));
        }
    }
    (cols, cons)
}

/// `max mu1 R1 + mu2 R2` over the sub-rate polytope of `mi`.
///
/// An empty polytope gives value 0 and status [`ProjectionStatus::Empty`].
/// A mask that leaves a rate unbounded is a usage error.
pub fn project(mi: &MITerms, mu: [f64; 2]) -> Result<Projection> {
    mi.validate()?;
    if mu[0] < 0.0 || mu[1] < 0.0 {
        return Err(Error::Domain(format!(
            "direction {mu:?} must be nonnegative"
        )));
    }
    let (cols, cons) = build(mi);
    let weight = |r: &SubRate| match r {
        SubRate::R1c | SubRate::R1p | SubRate::R1cb | SubRate::R1pb => mu[0],
        SubRate::R2c | SubRate::R2p | SubRate::R2cb | SubRate::R2pb => mu[1],
        _ => 0.0,
    };
    let c: Vec<f64> = cols.iter().map(weight).collect();
    let sol = maximize(&c, &cons);
    match sol.status {
        LpStatus::Optimal => {
            let mut rates = SubRateVector::default();
            for (r, x) in cols.iter().zip(&sol.x) {
                rates.0[*r as usize] = *x;
            }
            Ok(Projection {
                value: sol.value.max(0.0),
                rates,
                status: ProjectionStatus::Optimal,
                infeasibility: 0.0,
            })
        }
        LpStatus::Infeasible => Ok(Projection {
            value: 0.0,
            rates: SubRateVector::default(),
            status: ProjectionStatus::Empty,
            infeasibility: sol.infeasibility,
        }),
        LpStatus::Unbounded => Err(Error::Usage(
            "scheme mask leaves a message rate unbounded".into(),
        )),
    }
}

/// The projected region as a [`Support`] object.
#[derive(Clone, Debug)]
pub struct LpRegion {
    mi: MITerms,
}

impl LpRegion {
    /// Checks once that the region is bounded in both rate directions.
    pub fn new(mi: MITerms) -> Result<Self> {
        project(&mi, [1.0, 1.0])?;
        Ok(Self { mi })
    }

    pub fn terms(&self) -> &MITerms {
        &self.mi
    }

    pub fn project(&self, mu: [f64; 2]) -> Projection {
        project(&self.mi, mu).expect("bounded and validated at construction")
    }
}

impl Support for LpRegion {
    fn support(&self, mu: [f64; 2]) -> (f64, RatePoint) {
        let p = self.project(mu);
        (p.value, p.rates.point())
    }
}

/// Projects at `n` equiangular directions. The witness parameters are the
/// sub-rates in [`SubRate::ALL`] order.
pub fn project_frontier(mi: &MITerms, n: usize, source: &str) -> Result<Frontier> {
    let dirs = directions(n);
    let mut values = Vec::with_capacity(n);
    let mut witnesses = Vec::with_capacity(n);
    for mu in &dirs {
        let p = project(mi, *mu)?;
        values.push(p.value);
        witnesses.push(Some(Witness {
            point: p.rates.point(),
            params: p.rates.0.to_vec(),
        }));
    }
    let mut f = Frontier::new(dirs, values, source)?;
    f.witnesses = witnesses;
    Ok(f)
}
