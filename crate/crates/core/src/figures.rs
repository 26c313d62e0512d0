//! Figure data: exact series rendered as CSV, and a reader that re-checks
//! the row invariants on emitted files.

use std::fmt;
use std::str::FromStr;

use num_rational::BigRational;
use num_traits::{Signed, Zero};
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::exact::{ceil, decimal_string, int, parse_rational, powi, rat};
use crate::spectrum::{riesz_mean, RieszValue, SpectrumParams};
use crate::zoo::{f_as_ratfun, q_eval, r_eval};

/// Significant digits in rendered CSV values.
pub const CSV_DIGITS: u32 = 15;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum FigureId {
    LtD3,
    RdVsQd,
    FPlot,
}

impl FigureId {
    pub const NAMES: [&'static str; 3] = ["lt-d3", "rd-vs-qd", "f-plot"];

    pub fn name(self) -> &'static str {
        match self {
            FigureId::LtD3 => "lt-d3",
            FigureId::RdVsQd => "rd-vs-qd",
            FigureId::FPlot => "f-plot",
        }
    }
}

impl fmt::Display for FigureId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for FigureId {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "lt-d3" => Ok(FigureId::LtD3),
            "rd-vs-qd" => Ok(FigureId::RdVsQd),
            "f-plot" => Ok(FigureId::FPlot),
            _ => Err(Error::Parse { input: s.to_string() }),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Column {
    pub name: String,
    pub unit: String,
    pub values: Vec<BigRational>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FigureDataset {
    pub figure_id: FigureId,
    pub columns: Vec<Column>,
    pub metadata: String,
}

/// Grid `(start, stop]` with the given step.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Grid {
    pub start: BigRational,
    pub stop: BigRational,
    pub step: BigRational,
}

impl Grid {
    pub fn new(start: BigRational, stop: BigRational, step: BigRational) -> Result<Self> {
        if !step.is_positive() || start >= stop {
            return Err(Error::Precondition("grid needs step > 0 and start < stop".into()));
        }
        Ok(Grid { start, stop, step })
    }

    /// Points `start + k·step` for `k ≥ 1` up to and including `stop`.
    pub fn points(&self) -> Vec<BigRational> {
        let n = ((&self.stop - &self.start) / &self.step).floor().to_integer();
        let n: i64 = n.try_into().expect("grid size fits");
        (1..=n).map(|k| &self.start + &self.step * int(k)).collect()
    }

    pub fn default_for(id: FigureId) -> Grid {
        let step = rat(1, 100);
        match id {
            FigureId::LtD3 => Grid { start: int(2), stop: int(20), step },
            FigureId::RdVsQd => Grid { start: int(0), stop: int(8), step },
            FigureId::FPlot => Grid { start: int(-5), stop: int(3), step },
        }
    }
}

fn col(name: &str, unit: &str, values: Vec<BigRational>) -> Column {
    Column {
        name: name.to_string(),
        unit: unit.to_string(),
        values,
    }
}

impl FigureDataset {
    pub fn rows(&self) -> usize {
        self.columns.first().map_or(0, |c| c.values.len())
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::new();
        let header: Vec<String> = self.columns.iter().map(|c| format!("{} [{}]", c.name, c.unit)).collect();
        out.push_str(&header.join(","));
        out.push('\n');
        for i in 0..self.rows() {
            let row: Vec<String> = self.columns.iter().map(|c| decimal_string(&c.values[i], CSV_DIGITS)).collect();
            out.push_str(&row.join(","));
            out.push('\n');
        }
        out
    }
}

/// `d = 3` Riesz mean minus `η³/12 - η²/8`, between `-η/12` and `ϰ/24`.
pub fn lt_d3(grid: &Grid) -> Result<FigureDataset> {
    let etas = grid.points();
    let rows: Vec<[BigRational; 3]> = etas
        .par_iter()
        .map(|eta| {
            let p = SpectrumParams::new(3, eta.clone())?;
            let tr = match riesz_mean(&p, &int(1), 0)? {
                RieszValue::Exact(v) => v,
                RieszValue::Approx(_) => unreachable!("integer gamma is exact"),
            };
            let middle = tr - powi(eta, 3) / int(12) + eta * eta / int(8);
            let kappa = BigRational::from_integer(ceil(&(eta / int(2))) * 2 - 1);
            Ok([middle, -eta / int(12), kappa / int(24)])
        })
        .collect::<Result<_>>()?;
    let pick = |i: usize| rows.iter().map(|r| r[i].clone()).collect();
    Ok(FigureDataset {
        figure_id: FigureId::LtD3,
        columns: vec![
            col("eta", "sqrt(Lambda)", etas.clone()),
            col("tr_minus_cubic", "Lambda", pick(0)),
            col("lower", "Lambda", pick(1)),
            col("upper", "Lambda", pick(2)),
        ],
        metadata: "d = 3, gamma = 1 correction term with its two envelopes".into(),
    })
}

/// `Q_d(τ)` against `R_d(2τ + d - 1)` for `d ∈ {5, 6}`.
pub fn rd_vs_qd(grid: &Grid) -> Result<FigureDataset> {
    let taus = grid.points();
    if taus.iter().any(|t| !t.is_positive()) {
        return Err(Error::Precondition("tau grid must be positive".into()));
    }
    let rows: Vec<[BigRational; 4]> = taus
        .par_iter()
        .map(|tau| {
            let mut out: [BigRational; 4] = Default::default();
            for (k, d) in [5u32, 6].into_iter().enumerate() {
                out[2 * k] = q_eval(d, tau)?;
                out[2 * k + 1] = r_eval(d, &(tau * int(2) + int(d as i64 - 1)))?;
            }
            Ok(out)
        })
        .collect::<Result<_>>()?;
    let pick = |i: usize| rows.iter().map(|r| r[i].clone()).collect();
    Ok(FigureDataset {
        figure_id: FigureId::RdVsQd,
        columns: vec![
            col("tau", "1", taus.clone()),
            col("Q_5", "1", pick(0)),
            col("R_5", "1", pick(1)),
            col("Q_6", "1", pick(2)),
            col("R_6", "1", pick(3)),
        ],
        metadata: "excess factor R_d(2 tau + d - 1) below Q_d(tau), d = 5, 6".into(),
    })
}

/// Poles of `f_6`.
fn f6_poles() -> Vec<BigRational> {
    let mut p: Vec<BigRational> = (1..=5).map(|k| int(-k)).collect();
    p.push(rat(-5, 2));
    p
}

/// `f_6(t)` with the points within `1/20` of a pole left out.
pub fn f_plot(grid: &Grid) -> Result<FigureDataset> {
    let f = f_as_ratfun(6);
    let poles = f6_poles();
    let window = rat(1, 20);
    let ts: Vec<BigRational> = grid
        .points()
        .into_iter()
        .filter(|t| poles.iter().all(|p| (t - p).abs() > window))
        .collect();
    let vals: Vec<BigRational> = ts.par_iter().map(|t| f.eval(t)).collect::<Result<_>>()?;
    Ok(FigureDataset {
        figure_id: FigureId::FPlot,
        columns: vec![col("t", "1", ts), col("f_6", "1", vals)],
        metadata: "f_6 away from its poles".into(),
    })
}

pub fn build(id: FigureId, grid: &Grid) -> Result<FigureDataset> {
    match id {
        FigureId::LtD3 => lt_d3(grid),
        FigureId::RdVsQd => rd_vs_qd(grid),
        FigureId::FPlot => f_plot(grid),
    }
}

/// What a CSV reader can re-establish from an emitted file.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct CsvSummary {
    pub rows: usize,
    /// Rows breaking the figure's inequality.
    pub violations: usize,
    /// Grid values where the middle series meets the upper / lower envelope.
    pub upper_touches: Vec<BigRational>,
    pub lower_touches: Vec<BigRational>,
    /// Sign changes between rows one grid step apart.
    pub sign_changes: usize,
}

fn parse_csv(text: &str) -> Result<(Vec<String>, Vec<Vec<BigRational>>)> {
    let mut lines = text.split('\n');
    let header: Vec<String> = lines
        .next()
        .ok_or_else(|| Error::Parse { input: "empty csv".into() })?
        .split(',')
        .map(str::to_string)
        .collect();
    let mut rows = Vec::new();
    for line in lines.filter(|l| !l.is_empty()) {
        let row: Vec<BigRational> = line.split(',').map(parse_rational).collect::<Result<_>>()?;
        if row.len() != header.len() {
            return Err(Error::Parse { input: line.to_string() });
        }
        rows.push(row);
    }
    Ok((header, rows))
}

/// Re-reads an emitted CSV and evaluates the figure's row invariants.
pub fn check_csv(id: FigureId, text: &str, step: &BigRational) -> Result<CsvSummary> {
    if text.contains('\r') {
        return Err(Error::Parse { input: "CR line ending".into() });
    }
    let (_, rows) = parse_csv(text)?;
    let mut s = CsvSummary {
        rows: rows.len(),
        ..CsvSummary::default()
    };
    match id {
        FigureId::LtD3 => {
            for r in &rows {
                if r[1] < r[2] || r[1] > r[3] {
                    s.violations += 1;
                }
                if r[1] == r[3] {
                    s.upper_touches.push(r[0].clone());
                }
                if r[1] == r[2] {
                    s.lower_touches.push(r[0].clone());
                }
            }
        }
        FigureId::RdVsQd => {
            s.violations = rows.iter().filter(|r| r[2] > r[1] || r[4] > r[3]).count();
        }
        FigureId::FPlot => {
            for w in rows.windows(2) {
                let adjacent = &w[1][0] - &w[0][0] == *step;
                let (a, b) = (&w[0][1], &w[1][1]);
                if adjacent && !a.is_zero() && !b.is_zero() && a.is_positive() != b.is_positive() {
                    s.sign_changes += 1;
                }
            }
        }
    }
    Ok(s)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn grid_points() {
        let g = Grid::new(int(2), rat(21, 10), rat(1, 100)).unwrap();
        let p = g.points();
        assert_eq!(p.len(), 10);
        assert_eq!(p[0], rat(201, 100));
        assert_eq!(p[9], rat(21, 10));
        assert!(Grid::new(int(2), int(1), rat(1, 10)).is_err());
    }

    #[test]
    fn lt_d3_row_at_five() {
        let ds = lt_d3(&Grid::default_for(FigureId::LtD3)).unwrap();
        assert_eq!(ds.rows(), 1800);
        let i = ds.columns[0].values.iter().position(|e| *e == int(5)).unwrap();
        assert_eq!(ds.columns[1].values[i], ds.columns[3].values[i]);
        let csv = ds.to_csv();
        assert!(csv.starts_with("eta [sqrt(Lambda)],tr_minus_cubic [Lambda],lower [Lambda],upper [Lambda]\n"));
        let s = check_csv(FigureId::LtD3, &csv, &rat(1, 100)).unwrap();
        assert_eq!(s.violations, 0);
        let odd: Vec<_> = (1..=9).map(|k| int(2 * k + 1)).collect();
        let even: Vec<_> = (2..=10).map(|k| int(2 * k)).collect();
        for e in &odd {
            assert!(s.upper_touches.contains(e), "{e}");
        }
        for e in &even {
            assert!(s.lower_touches.contains(e), "{e}");
        }
    }

    #[test]
    fn rd_vs_qd_rows() {
        let ds = rd_vs_qd(&Grid::default_for(FigureId::RdVsQd)).unwrap();
        assert_eq!(ds.rows(), 800);
        let s = check_csv(FigureId::RdVsQd, &ds.to_csv(), &rat(1, 100)).unwrap();
        assert_eq!((s.rows, s.violations), (800, 0));
    }

    #[test]
    fn f_plot_four_sign_changes() {
        let ds = f_plot(&Grid::default_for(FigureId::FPlot)).unwrap();
        let s = check_csv(FigureId::FPlot, &ds.to_csv(), &rat(1, 100)).unwrap();
        assert_eq!(s.sign_changes, 4);
        assert!(ds.columns[0].values.iter().all(|t| (t - rat(-5, 2)).abs() > rat(1, 20)));
    }

    #[test]
    fn csv_is_deterministic() {
        let g = Grid::new(int(0), int(1), rat(1, 20)).unwrap();
        assert_eq!(rd_vs_qd(&g).unwrap().to_csv(), rd_vs_qd(&g).unwrap().to_csv());
    }

    #[test]
    fn figure_names() {
        for n in FigureId::NAMES {
            assert_eq!(n.parse::<FigureId>().unwrap().name(), n);
        }
        assert!("nope".parse::<FigureId>().is_err());
    }
}
