//! Rate regions and their support-function representation.
//!
//! A convex region `R` in the nonnegative quadrant is summarized by samples
//! of `h(mu) = max { mu . r : r in R }` over directions `mu >= 0`. Unions over
//! input parameters are handled by maximizing `h` over the parameters, which
//! yields the support function of the convex hull of the union.

mod hull;
mod optimize;

pub use hull::{convexify, Envelope};
pub use optimize::{frontier, support_value, OptimizerConfig, ParamFamily, RegionEvaluator};

use crate::error::{Error, Result};
use crate::io::fmt_num;
use serde::Serialize;
use std::f64::consts::FRAC_PI_2;
use std::io::{Read, Write};

/// An achievable (or bounding) rate pair, in bits per channel use.
#[derive(Clone, Copy, Debug, Default, PartialEq, Serialize)]
pub struct RatePoint {
    pub r1: f64,
    pub r2: f64,
}

impl RatePoint {
    pub const ORIGIN: RatePoint = RatePoint { r1: 0.0, r2: 0.0 };

    pub fn new(r1: f64, r2: f64) -> Self {
        Self { r1, r2 }
    }

    pub fn dot(&self, mu: [f64; 2]) -> f64 {
        mu[0] * self.r1 + mu[1] * self.r2
    }
}

/// Anything with a support function over the nonnegative quadrant.
pub trait Support: Send + Sync {
    /// `max mu . r` over the region and a point attaining it. Empty regions
    /// report `(0, origin)`.
    fn support(&self, mu: [f64; 2]) -> (f64, RatePoint);
}

/// `a1 R1 + a2 R2 <= b` with `a1, a2 >= 0`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct HalfPlane {
    pub a1: f64,
    pub a2: f64,
    pub b: f64,
}

impl HalfPlane {
    pub fn r1(b: f64) -> Self {
        Self {
            a1: 1.0,
            a2: 0.0,
            b,
        }
    }
    pub fn r2(b: f64) -> Self {
        Self {
            a1: 0.0,
            a2: 1.0,
            b,
        }
    }
    pub fn sum(b: f64) -> Self {
        Self {
            a1: 1.0,
            a2: 1.0,
            b,
        }
    }
    pub fn new(a1: f64, a2: f64, b: f64) -> Self {
        Self { a1, a2, b }
    }
    fn slack(&self, p: RatePoint) -> f64 {
        self.b - self.a1 * p.r1 - self.a2 * p.r2
    }
}

/// A bounded polygon `{ r >= 0 : every bound holds }`, stored with its vertices.
#[derive(Clone, Debug, PartialEq)]
pub struct Polygon {
    bounds: Vec<HalfPlane>,
    vertices: Vec<RatePoint>,
}

impl Polygon {
    /// Builds the polygon. Every bound must have nonnegative coefficients and
    /// some bound must limit each rate on its own or through a sum.
    pub fn new(bounds: Vec<HalfPlane>) -> Result<Self> {
        for h in &bounds {
            if !(h.a1 >= 0.0 && h.a2 >= 0.0) || !h.b.is_finite() && h.b != f64::INFINITY {
                return Err(Error::Domain(format!("invalid rate bound {h:?}")));
            }
        }
        let bounded =
            |sel: fn(&HalfPlane) -> f64| bounds.iter().any(|h| sel(h) > 0.0 && h.b.is_finite());
        if !bounded(|h| h.a1) || !bounded(|h| h.a2) {
            return Err(Error::Domain("rate region is unbounded".into()));
        }
        let vertices = enumerate_vertices(&bounds);
        Ok(Self { bounds, vertices })
    }

    pub fn bounds(&self) -> &[HalfPlane] {
        &self.bounds
    }

    pub fn vertices(&self) -> &[RatePoint] {
        &self.vertices
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }

    pub fn contains(&self, p: RatePoint, tol: f64) -> bool {
        p.r1 >= -tol && p.r2 >= -tol && self.bounds.iter().all(|h| h.slack(p) >= -tol)
    }
}

impl Support for Polygon {
    fn support(&self, mu: [f64; 2]) -> (f64, RatePoint) {
        best_vertex(&self.vertices, mu)
    }
}

pub(crate) fn best_vertex(vertices: &[RatePoint], mu: [f64; 2]) -> (f64, RatePoint) {
    let mut best = (0.0, RatePoint::ORIGIN);
    let mut first = true;
    for v in vertices {
        let s = v.dot(mu);
        if first || s > best.0 {
            best = (s, *v);
            first = false;
        }
    }
    best
}

fn enumerate_vertices(bounds: &[HalfPlane]) -> Vec<RatePoint> {
    let finite: Vec<HalfPlane> = bounds.iter().copied().filter(|h| h.b.is_finite()).collect();
    let scale = finite.iter().map(|h| h.b.abs()).fold(1.0, f64::max);
    let tol = 1e-12 * scale;
    let mut lines = finite.clone();
    lines.push(HalfPlane {
        a1: -1.0,
        a2: 0.0,
        b: 0.0,
    });
    lines.push(HalfPlane {
        a1: 0.0,
        a2: -1.0,
        b: 0.0,
    });
    let mut out: Vec<RatePoint> = Vec::new();
    for i in 0..lines.len() {
        for j in (i + 1)..lines.len() {
            let (p, q) = (lines[i], lines[j]);
            let det = p.a1 * q.a2 - p.a2 * q.a1;
            if det.abs() < 1e-14 {
                continue;
            }
            let r1 = (p.b * q.a2 - p.a2 * q.b) / det;
            let r2 = (p.a1 * q.b - p.b * q.a1) / det;
            let v = RatePoint::new(r1, r2);
            if r1 >= -tol && r2 >= -tol && finite.iter().all(|h| h.slack(v) >= -tol) {
                let v = RatePoint::new(r1.max(0.0), r2.max(0.0));
                if !out
                    .iter()
                    .any(|w| (w.r1 - v.r1).abs() <= tol && (w.r2 - v.r2).abs() <= tol)
                {
                    out.push(v);
                }
            }
        }
    }
    out
}

/// `n` equiangular unit directions from `(1, 0)` to `(0, 1)`.
pub fn directions(n: usize) -> Vec<[f64; 2]> {
    (0..n)
        .map(|i| {
            let t = FRAC_PI_2 * i as f64 / (n - 1).max(1) as f64;
            if i == 0 {
                [1.0, 0.0]
            } else if i + 1 == n {
                [0.0, 1.0]
            } else {
                [t.cos(), t.sin()]
            }
        })
        .collect()
}

fn angle(mu: [f64; 2]) -> f64 {
    mu[1].atan2(mu[0])
}

/// Witness of a support value: the maximizing rate pair and the parameters
/// that produced it.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct Witness {
    pub point: RatePoint,
    pub params: Vec<f64>,
}

/// Status of a frontier, written to the `validity_flag` CSV column.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Validity {
    /// An inner bound.
    Achievable,
    /// An outer bound whose hypotheses hold for this channel.
    Valid,
    /// An outer-bound expression evaluated outside its hypotheses.
    Invalid,
    /// Inner and outer bounds coincide.
    Capacity,
}

impl Validity {
    pub fn as_str(&self) -> &'static str {
        match self {
            Validity::Achievable => "achievable",
            Validity::Valid => "valid",
            Validity::Invalid => "invalid",
            Validity::Capacity => "capacity",
        }
    }

    fn parse(s: &str) -> Result<Self> {
        Ok(match s {
            "achievable" => Validity::Achievable,
            "valid" => Validity::Valid,
            "invalid" => Validity::Invalid,
            "capacity" => Validity::Capacity,
            _ => return Err(Error::Usage(format!("unknown validity flag '{s}'"))),
        })
    }
}

/// Support-function samples of a convex rate region.
#[derive(Clone, Debug, PartialEq)]
pub struct Frontier {
    pub directions: Vec<[f64; 2]>,
    pub values: Vec<f64>,
    pub witnesses: Vec<Option<Witness>>,
    pub source: String,
    pub validity: Validity,
}

impl Frontier {
    pub fn new(
        directions: Vec<[f64; 2]>,
        values: Vec<f64>,
        source: impl Into<String>,
    ) -> Result<Self> {
        if directions.len() != values.len() {
            return Err(Error::Domain(
                "directions and values differ in length".into(),
            ));
        }
        for w in directions.windows(2) {
            if angle(w[1]) <= angle(w[0]) {
                return Err(Error::Domain(
                    "directions must be sorted by strictly increasing angle".into(),
                ));
            }
        }
        for (mu, v) in directions.iter().zip(&values) {
            if mu[0] < 0.0 || mu[1] < 0.0 || !v.is_finite() || *v < 0.0 {
                return Err(Error::Domain(format!(
                    "invalid support sample {mu:?} -> {v}"
                )));
            }
        }
        let n = values.len();
        Ok(Self {
            directions,
            values,
            witnesses: vec![None; n],
            source: source.into(),
            validity: Validity::Achievable,
        })
    }

    /// Samples any [`Support`] region at `n` equiangular directions.
    pub fn from_support(s: &dyn Support, n: usize, source: impl Into<String>) -> Self {
        let dirs = directions(n);
        let mut values = Vec::with_capacity(n);
        let mut witnesses = Vec::with_capacity(n);
        for mu in &dirs {
            let (v, p) = s.support(*mu);
            values.push(v);
            witnesses.push(Some(Witness {
                point: p,
                params: vec![],
            }));
        }
        Self {
            directions: dirs,
            values,
            witnesses,
            source: source.into(),
            validity: Validity::Achievable,
        }
    }

    pub fn with_validity(mut self, v: Validity) -> Self {
        self.validity = v;
        self
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    /// Raises every sample to the best witness seen in any direction. All
    /// witnesses belong to the region, so this only repairs optimizer misses.
    pub fn cleanup(&mut self) {
        let pts: Vec<(RatePoint, Vec<f64>)> = self
            .witnesses
            .iter()
            .flatten()
            .map(|w| (w.point, w.params.clone()))
            .collect();
        for i in 0..self.len() {
            let mu = self.directions[i];
            for (p, params) in &pts {
                let s = p.dot(mu);
                if s > self.values[i] {
                    self.values[i] = s;
                    self.witnesses[i] = Some(Witness {
                        point: *p,
                        params: params.clone(),
                    });
                }
            }
            self.values[i] = self.values[i].max(0.0);
        }
    }

    /// The polygon `{ r >= 0 : mu_i . r <= h_i }` induced by the samples.
    pub fn outline(&self) -> Result<Polygon> {
        let bounds = self
            .directions
            .iter()
            .zip(&self.values)
            .map(|(mu, h)| HalfPlane::new(mu[0], mu[1], *h))
            .collect();
        Polygon::new(bounds)
    }

    /// Support samples of the induced outline at other directions.
    pub fn resample(&self, dirs: &[[f64; 2]]) -> Result<Frontier> {
        let poly = self.outline()?;
        let mut values = Vec::with_capacity(dirs.len());
        let mut witnesses = Vec::with_capacity(dirs.len());
        for (mu, (v, p)) in dirs.iter().map(|mu| (mu, poly.support(*mu))) {
            match self.directions.iter().position(|d| same_dir(*d, *mu)) {
                Some(i) => {
                    values.push(self.values[i]);
                    witnesses.push(self.witnesses[i].clone());
                }
                None => {
                    values.push(v);
                    witnesses.push(Some(Witness {
                        point: p,
                        params: vec![],
                    }));
                }
            }
        }
        Ok(Frontier {
            directions: dirs.to_vec(),
            values,
            witnesses,
            source: self.source.clone(),
            validity: self.validity,
        })
    }

    fn same_directions(&self, other: &Frontier) -> bool {
        self.len() == other.len()
            && self
                .directions
                .iter()
                .zip(&other.directions)
                .all(|(a, b)| same_dir(*a, *b))
    }

    pub fn write_csv<W: Write>(&self, w: W) -> Result<()> {
        write_frontiers_csv(std::slice::from_ref(self), w)
    }
}

fn same_dir(a: [f64; 2], b: [f64; 2]) -> bool {
    (a[0] - b[0]).abs() <= 1e-12 && (a[1] - b[1]).abs() <= 1e-12
}

/// Outcome of [`contains`].
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ContainmentReport {
    pub contained: bool,
    /// `max (h_inner - h_outer)`; negative means strict slack everywhere.
    pub max_gap: f64,
    pub worst_direction: [f64; 2],
    pub tol: f64,
}

/// Checks `h_inner(mu) <= h_outer(mu) + tol` at every sampled direction.
/// Frontiers on different direction sets are compared on the union of both.
pub fn contains(outer: &Frontier, inner: &Frontier, tol: f64) -> Result<ContainmentReport> {
    let (o, i) = if outer.same_directions(inner) {
        (outer.clone(), inner.clone())
    } else {
        let mut dirs: Vec<[f64; 2]> = outer
            .directions
            .iter()
            .chain(&inner.directions)
            .copied()
            .collect();
        dirs.sort_by(|a, b| angle(*a).total_cmp(&angle(*b)));
        dirs.dedup_by(|a, b| same_dir(*a, *b));
        (outer.resample(&dirs)?, inner.resample(&dirs)?)
    };
    let mut max_gap = f64::NEG_INFINITY;
    let mut worst = [1.0, 0.0];
    for k in 0..o.len() {
        let gap = i.values[k] - o.values[k];
        if gap > max_gap {
            max_gap = gap;
            worst = o.directions[k];
        }
    }
    if o.is_empty() {
        max_gap = 0.0;
    }
    Ok(ContainmentReport {
        contained: max_gap <= tol,
        max_gap,
        worst_direction: worst,
        tol,
    })
}

pub const CSV_HEADER: [&str; 7] = [
    "mu1",
    "mu2",
    "value_bits",
    "witness_r1",
    "witness_r2",
    "source",
    "validity_flag",
];

/// Writes one or more frontiers as a single CSV table. Witness parameters
/// fill `param_0 ..`, padded to the widest row.
pub fn write_frontiers_csv<W: Write>(frontiers: &[Frontier], w: W) -> Result<()> {
    let np = frontiers
        .iter()
        .flat_map(|f| f.witnesses.iter().flatten().map(|w| w.params.len()))
        .max()
        .unwrap_or(0);
    let mut wr = csv::Writer::from_writer(w);
    let mut header: Vec<String> = CSV_HEADER.iter().map(|s| s.to_string()).collect();
    header.extend((0..np).map(|k| format!("param_{k}")));
    wr.write_record(&header)?;
    for f in frontiers {
        for k in 0..f.len() {
            let (p, params) = match &f.witnesses[k] {
                Some(w) => (Some(w.point), w.params.as_slice()),
                None => (None, &[][..]),
            };
            let mut rec = vec![
                fmt_num(f.directions[k][0]),
                fmt_num(f.directions[k][1]),
                fmt_num(f.values[k]),
                p.map(|p| fmt_num(p.r1)).unwrap_or_default(),
                p.map(|p| fmt_num(p.r2)).unwrap_or_default(),
                f.source.clone(),
                f.validity.as_str().to_string(),
            ];
            rec.extend((0..np).map(|j| params.get(j).map(|x| fmt_num(*x)).unwrap_or_default()));
            wr.write_record(&rec)?;
        }
    }
    wr.flush()?;
    Ok(())
}

/// Reads frontier CSV, grouping consecutive rows by `source`.
pub fn read_frontiers_csv<R: Read>(r: R) -> Result<Vec<Frontier>> {
    let mut rd = csv::Reader::from_reader(r);
    let header = rd.headers()?.clone();
    for (k, name) in CSV_HEADER.iter().enumerate() {
        if header.get(k) != Some(*name) {
            return Err(Error::Usage(format!(
                "frontier CSV: column {} must be '{name}', found '{}'",
                k + 1,
                header.get(k).unwrap_or("")
            )));
        }
    }
    let num = |s: &str, line: u64, col: &str| -> Result<f64> {
        s.trim().parse::<f64>().map_err(|_| {
            Error::Usage(format!(
                "frontier CSV line {line}: bad number '{s}' in column {col}"
            ))
        })
    };
    let mut out: Vec<Frontier> = Vec::new();
    for rec in rd.records() {
        let rec = rec?;
        let line = rec.position().map(|p| p.line()).unwrap_or(0);
        let mu = [num(&rec[0], line, "mu1")?, num(&rec[1], line, "mu2")?];
        let v = num(&rec[2], line, "value_bits")?;
        let witness = if rec[3].is_empty() {
            None
        } else {
            let params = (7..rec.len())
                .filter(|&j| !rec[j].is_empty())
                .map(|j| num(&rec[j], line, &header[j]))
                .collect::<Result<Vec<_>>>()?;
            Some(Witness {
                point: RatePoint::new(
                    num(&rec[3], line, "witness_r1")?,
                    num(&rec[4], line, "witness_r2")?,
                ),
                params,
            })
        };
        let source = rec[5].to_string();
        let validity = Validity::parse(&rec[6])?;
        match out.last_mut() {
            Some(f) if f.source == source => {
                f.directions.push(mu);
                f.values.push(v);
                f.witnesses.push(witness);
            }
            _ => out.push(Frontier {
                directions: vec![mu],
                values: vec![v],
                witnesses: vec![witness],
                source,
                validity,
            }),
        }
    }
    if out.is_empty() {
        return Err(Error::Usage("frontier CSV has no rows".into()));
    }
    // Re-validate through the checked constructor.
    for f in &out {
        Frontier::new(f.directions.clone(), f.values.clone(), f.source.clone())?;
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn square() -> Polygon {
        Polygon::new(vec![HalfPlane::r1(1.0), HalfPlane::r2(1.0)]).unwrap()
    }

    #[test]
    fn square_support() {
        let s = square();
        assert_eq!(s.support([1.0, 0.0]).0, 1.0);
        let f = Frontier::from_support(&s, 9, "square");
        for (mu, v) in f.directions.iter().zip(&f.values) {
            assert!((v - mu[0] - mu[1]).abs() < 1e-15);
        }
    }

    #[test]
    fn pentagon_support() {
        let (a, b, s) = (1.0, 1.5, 2.0);
        let p = Polygon::new(vec![HalfPlane::r1(a), HalfPlane::r2(b), HalfPlane::sum(s)]).unwrap();
        let m = std::f64::consts::FRAC_1_SQRT_2;
        assert!((p.support([m, m]).0 - m * f64::min(a + b, s)).abs() < 1e-15);
        assert_eq!(p.vertices().len(), 5);
    }

    #[test]
    fn empty_polygon() {
        let p = Polygon::new(vec![HalfPlane::r1(-0.1), HalfPlane::r2(1.0)]).unwrap();
        assert!(p.is_empty());
        assert_eq!(p.support([0.0, 1.0]), (0.0, RatePoint::ORIGIN));
        assert!(Polygon::new(vec![HalfPlane::r1(1.0)]).is_err());
    }

    #[test]
    fn self_containment() {
        let f = Frontier::from_support(&square(), 16, "sq");
        let r = contains(&f, &f, 0.0).unwrap();
        assert!(r.contained && r.max_gap == 0.0);
    }

    #[test]
    fn half_square_slack() {
        let outer = Frontier::from_support(&square(), 16, "sq");
        let half = Polygon::new(vec![HalfPlane::r1(0.5), HalfPlane::r2(1.0)]).unwrap();
        let inner = Frontier::from_support(&half, 16, "half");
        let r = contains(&outer, &inner, 0.0).unwrap();
        assert!(r.contained);
        assert_eq!(r.max_gap, 0.0);
        let r = contains(&inner, &outer, 0.0).unwrap();
        assert!(!r.contained && (r.max_gap - 0.5).abs() < 1e-15 && r.worst_direction == [1.0, 0.0]);
    }

    #[test]
    fn resampled_comparison() {
        let a = Frontier::from_support(&square(), 5, "a");
        let b = Frontier::from_support(&square(), 7, "b");
        assert!(contains(&a, &b, 1e-12).unwrap().contained);
    }

    #[test]
    fn cleanup_lifts_missed_directions() {
        let mut f = Frontier::from_support(&square(), 3, "sq");
        f.values[1] = 0.1;
        f.cleanup();
        assert!((f.values[1] - std::f64::consts::SQRT_2).abs() < 1e-12);
    }

    #[test]
    fn csv_round_trip() {
        let mut f = Frontier::from_support(&square(), 5, "square").with_validity(Validity::Valid);
        f.witnesses[2].as_mut().unwrap().params = vec![0.25, -0.5];
        let mut buf = Vec::new();
        f.write_csv(&mut buf).unwrap();
        let text = String::from_utf8(buf.clone()).unwrap();
        assert!(text.starts_with(
            "mu1,mu2,value_bits,witness_r1,witness_r2,source,validity_flag,param_0,param_1\n"
        ));
        let back = read_frontiers_csv(&buf[..]).unwrap();
        assert_eq!(back.len(), 1);
        assert_eq!(back[0].validity, Validity::Valid);
        for k in 0..5 {
            assert!((back[0].values[k] - f.values[k]).abs() < 1e-11);
        }
        assert_eq!(
            back[0].witnesses[2].as_ref().unwrap().params,
            vec![0.25, -0.5]
        );
    }

    #[test]
    fn csv_schema_errors() {
        assert!(read_frontiers_csv("a,b\n1,2\n".as_bytes()).is_err());
        let hdr = CSV_HEADER.join(",");
        assert!(read_frontiers_csv(format!("{hdr}\n").as_bytes()).is_err());
        assert!(read_frontiers_csv(format!("{hdr}\n1,0,x,,,s,valid\n").as_bytes()).is_err());
    }
}
