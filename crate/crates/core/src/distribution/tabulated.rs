use std::io::Read;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::quadrature::adaptive_simpson;

/// Piecewise-linear CDF through `(time, cdf)` knots.
///
/// The CDF is 0 before the first knot (an implicit `(0, 0)` knot is added
/// when the table starts later), linear between knots and exactly 1 from
/// the last knot on. Two knots at the same time encode a jump; the CDF is
/// right-continuous there.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "KnotList", into = "KnotList")]
pub struct TabulatedCdf {
    times: Vec<f64>,
    values: Vec<f64>,
}

impl TabulatedCdf {
    /// Builds a table from knots that are non-decreasing in both columns.
    pub fn new(knots: Vec<(f64, f64)>) -> Result<Self> {
        if knots.is_empty() {
            return Err(Error::InvalidTable("table has no knots".into()));
        }
        let mut times = Vec::with_capacity(knots.len() + 1);
        let mut values = Vec::with_capacity(knots.len() + 1);
        if knots[0].0 > 0.0 {
            times.push(0.0);
            values.push(0.0);
        }
        for (i, &(t, c)) in knots.iter().enumerate() {
            if !(t.is_finite() && t >= 0.0) {
                return Err(Error::InvalidTable(format!("knot {i}: time {t} is not a finite non-negative number")));
            }
            if !(0.0..=1.0).contains(&c) {
                return Err(Error::InvalidTable(format!("knot {i}: CDF value {c} outside [0, 1]")));
            }
            if t == 0.0 && c > 0.0 {
                return Err(Error::InvalidTable("the CDF must vanish at t = 0".into()));
            }
            if let (Some(&pt), Some(&pc)) = (times.last(), values.last()) {
                if t < pt || c < pc {
                    return Err(Error::InvalidTable(format!("knot {i} ({t}, {c}) decreases")));
                }
            }
            times.push(t);
            values.push(c);
        }
        if *values.last().unwrap() != 1.0 {
            return Err(Error::InvalidTable(format!(
                "last CDF value must equal 1, got {}",
                values.last().unwrap()
            )));
        }
        Ok(Self { times, values })
    }

    /// Parses a two-column `time_s,cdf` CSV with a header row.
    ///
    /// Both columns must be strictly increasing.
    pub fn from_csv_reader<R: Read>(reader: R) -> Result<Self> {
        let mut rdr = csv::ReaderBuilder::new()
            .has_headers(true)
            .trim(csv::Trim::All)
            .from_reader(reader);
        let headers = rdr.headers()?.clone();
        if headers.len() != 2 {
            return Err(Error::InvalidTable(format!("expected 2 header columns, got {}", headers.len())));
        }
        let mut knots: Vec<(f64, f64)> = Vec::new();
        for (line, record) in rdr.records().enumerate() {
            let record = record?;
            if record.len() != 2 {
                return Err(Error::InvalidTable(format!("row {}: expected 2 columns", line + 1)));
            }
            let parse = |s: &str| {
                s.parse::<f64>()
                    .map_err(|e| Error::InvalidTable(format!("row {}: {s:?}: {e}", line + 1)))
            };
            let t = parse(&record[0])?;
            let c = parse(&record[1])?;
            if let Some(&(pt, pc)) = knots.last() {
                if !(t > pt && c > pc) {
                    return Err(Error::InvalidTable(format!(
                        "row {}: columns must be strictly increasing",
                        line + 1
                    )));
                }
            }
            knots.push((t, c));
        }
        Self::new(knots)
    }

    pub fn from_csv_path(path: impl AsRef<Path>) -> Result<Self> {
        let file = std::fs::File::open(path.as_ref())
            .map_err(|e| Error::Io(format!("{}: {e}", path.as_ref().display())))?;
        Self::from_csv_reader(file)
    }

    /// Tabulates `cdf` on `n` uniform intervals of `[0, t_max]`; the last
    /// knot is pinned to 1.
    pub fn from_fn<F: Fn(f64) -> f64>(cdf: F, t_max: f64, n: usize) -> Result<Self> {
        if n < 1 || !(t_max > 0.0) {
            return Err(Error::InvalidTable("need t_max > 0 and at least one interval".into()));
        }
        let mut knots: Vec<(f64, f64)> = (0..n)
            .map(|i| {
                let t = t_max * i as f64 / n as f64;
                (t, cdf(t).clamp(0.0, 1.0))
            })
            .collect();
        knots.push((t_max, 1.0));
        // Enforce monotonicity against rounding in the source CDF.
        for i in 1..knots.len() {
            if knots[i].1 < knots[i - 1].1 {
                knots[i].1 = knots[i - 1].1;
            }
        }
        Self::new(knots)
    }

    pub fn knots(&self) -> impl Iterator<Item = (f64, f64)> + '_ {
        self.times.iter().copied().zip(self.values.iter().copied())
    }

    pub fn times(&self) -> &[f64] {
        &self.times
    }

    pub fn support_end(&self) -> f64 {
        *self.times.last().unwrap()
    }

    fn segment(&self, t: f64) -> usize {
        // Index of the last knot with time <= t.
        self.times.partition_point(|&x| x <= t).saturating_sub(1)
    }

    pub fn cdf(&self, t: f64) -> f64 {
        if t < self.times[0] {
            return 0.0;
        }
        let i = self.segment(t);
        if i + 1 >= self.times.len() {
            return 1.0;
        }
        let (t0, t1) = (self.times[i], self.times[i + 1]);
        let (c0, c1) = (self.values[i], self.values[i + 1]);
        c0 + (c1 - c0) * (t - t0) / (t1 - t0)
    }

    pub fn slope(&self, t: f64) -> f64 {
        if t < self.times[0] {
            return 0.0;
        }
        let i = self.segment(t);
        if i + 1 >= self.times.len() {
            return 0.0;
        }
        (self.values[i + 1] - self.values[i]) / (self.times[i + 1] - self.times[i])
    }

    /// Exact integral of the CCDF of the piecewise-linear law.
    pub fn mean(&self) -> f64 {
        self.times
            .windows(2)
            .zip(self.values.windows(2))
            .map(|(t, c)| (t[1] - t[0]) * (1.0 - 0.5 * (c[0] + c[1])))
            .sum::<f64>()
    }

    pub fn quantile(&self, u: f64) -> f64 {
        let j = self.values.partition_point(|&c| c < u);
        if j == 0 {
            return self.times[0];
        }
        if j >= self.values.len() {
            return self.support_end();
        }
        let (t0, t1) = (self.times[j - 1], self.times[j]);
        let (c0, c1) = (self.values[j - 1], self.values[j]);
        if t1 == t0 {
            t1
        } else {
            t0 + (u - c0) / (c1 - c0) * (t1 - t0)
        }
    }

    /// `int_a^b cdf(t) dt`, by adaptive Simpson on each linear piece.
    ///
    /// Each piece is integrated with its own interpolant, so a jump at a
    /// piece boundary never leaks into the neighbouring panel.
    pub fn integrate(&self, a: f64, b: f64, abs_tol: f64) -> Result<f64> {
        if b <= a {
            return Ok(0.0);
        }
        let end = self.support_end();
        let mut total = 0.0;
        let first = self.segment(a.max(0.0));
        for i in first..self.times.len() - 1 {
            let (t0, t1) = (self.times[i], self.times[i + 1]);
            if t0 >= b {
                break;
            }
            let (lo, hi) = (a.max(t0), b.min(t1));
            if hi <= lo {
                continue;
            }
            let (c0, c1) = (self.values[i], self.values[i + 1]);
            let piece = |t: f64| c0 + (c1 - c0) * (t - t0) / (t1 - t0);
            total += adaptive_simpson(&piece, lo, hi, abs_tol)?;
        }
        if b > end {
            total += b - a.max(end);
        }
        Ok(total)
    }

    pub(crate) fn scaled(&self, factor: f64) -> Result<Self> {
        Self::new(self.knots().map(|(t, c)| (t * factor, c)).collect())
    }
}

/// Serialised form: a map rather than a bare list, so that the table can
/// sit inside the internally tagged distribution enum.
#[derive(Serialize, Deserialize)]
struct KnotList {
    knots: Vec<(f64, f64)>,
}

impl TryFrom<KnotList> for TabulatedCdf {
    type Error = Error;

    fn try_from(list: KnotList) -> Result<Self> {
        Self::new(list.knots)
    }
}

impl From<TabulatedCdf> for KnotList {
    fn from(table: TabulatedCdf) -> Self {
        KnotList { knots: table.knots().collect() }
    }
}
