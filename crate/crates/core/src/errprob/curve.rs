use std::fmt;
use std::str::FromStr;

use super::bounds::{BoundKind, UnionBound};
use super::pairwise::PairwiseMethod;
use crate::constellation::fmt_f64;
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CurveKind {
    SymbolUnionBound,
    BitUnionBound,
    Asymptotic0,
    Asymptotic1,
    AsymptoticSimple,
    MonteCarlo,
}

impl CurveKind {
    pub const ALL: [CurveKind; 6] = [
        CurveKind::SymbolUnionBound,
        CurveKind::BitUnionBound,
        CurveKind::Asymptotic0,
        CurveKind::Asymptotic1,
        CurveKind::AsymptoticSimple,
        CurveKind::MonteCarlo,
    ];

    pub fn name(self) -> &'static str {
        match self {
            CurveKind::SymbolUnionBound => "symbolUnionBound",
            CurveKind::BitUnionBound => "bitUnionBound",
            CurveKind::Asymptotic0 => "asymptotic0",
            CurveKind::Asymptotic1 => "asymptotic1",
            CurveKind::AsymptoticSimple => "asymptoticSimple",
            CurveKind::MonteCarlo => "monteCarlo",
        }
    }

    pub fn is_bound(self) -> bool {
        self != CurveKind::MonteCarlo
    }
}

impl fmt::Display for CurveKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for CurveKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        CurveKind::ALL
            .into_iter()
            .find(|k| k.name() == s)
            .ok_or_else(|| Error::Format(format!("unknown curve kind '{s}'")))
    }
}

/// Probability versus SNR in dB.
#[derive(Debug, Clone, PartialEq)]
pub struct BerCurve {
    pub kind: CurveKind,
    points: Vec<(f64, f64)>,
}

impl BerCurve {
    pub fn new(kind: CurveKind, points: Vec<(f64, f64)>) -> Result<Self> {
        if points.windows(2).any(|w| !(w[1].0 > w[0].0)) {
            return Err(Error::InvalidParameter("SNR grid must be strictly increasing".into()));
        }
        if points.iter().any(|&(_, p)| !(0.0..=1.0).contains(&p)) {
            return Err(Error::InvalidParameter("probability outside [0, 1]".into()));
        }
        Ok(Self { kind, points })
    }

    /// Evaluates a bound over a bit-SNR grid (symbol-SNR grid for the
    /// symbol union bound). Asymptotic kinds use the bit bound when labels
    /// are present and the symbol bound otherwise.
    pub fn from_bound(ub: &UnionBound, snr_db: &[f64], kind: CurveKind) -> Result<Self> {
        let (bound, method) = match kind {
            CurveKind::SymbolUnionBound => (BoundKind::Symbol, PairwiseMethod::Auto),
            CurveKind::BitUnionBound => (BoundKind::Bit, PairwiseMethod::Auto),
            CurveKind::Asymptotic0 => (labelled(ub), PairwiseMethod::Asymptotic0),
            CurveKind::Asymptotic1 => (labelled(ub), PairwiseMethod::Asymptotic1),
            CurveKind::AsymptoticSimple => (labelled(ub), PairwiseMethod::Simple),
            CurveKind::MonteCarlo => {
                return Err(Error::InvalidParameter("Monte-Carlo curves come from simulation".into()))
            }
        };
        let points = snr_db
            .iter()
            .map(|&db| {
                let snr = ub.snr_at_db(db, bound)?;
                Ok((db, ub.evaluate(&snr, bound, method)?))
            })
            .collect::<Result<Vec<_>>>()?;
        Self::new(kind, points)
    }

    pub fn points(&self) -> &[(f64, f64)] {
        &self.points
    }

    pub fn is_non_increasing(&self) -> bool {
        self.points.windows(2).all(|w| w[1].1 <= w[0].1)
    }

    pub fn csv_header() -> &'static str {
        "snr_db,value,kind"
    }

    /// Rows without the header.
    pub fn csv_rows(&self) -> String {
        let mut out = String::new();
        for &(db, p) in &self.points {
            out.push_str(&format!("{},{},{}\n", fmt_f64(db), fmt_f64(p), self.kind));
        }
        out
    }

    pub fn to_csv(&self) -> String {
        format!("{}\n{}", Self::csv_header(), self.csv_rows())
    }

    /// Parses a CSV with the standard header; rows of all kinds are grouped
    /// into one curve per kind, in order of first appearance.
    pub fn parse_csv(text: &str) -> Result<Vec<BerCurve>> {
        let mut lines = text.lines();
        if lines.next().map(str::trim) != Some(Self::csv_header()) {
            return Err(Error::Format("missing curve CSV header".into()));
        }
        let mut curves: Vec<(CurveKind, Vec<(f64, f64)>)> = Vec::new();
        for line in lines.filter(|l| !l.trim().is_empty()) {
            let cols: Vec<&str> = line.split(',').collect();
            if cols.len() != 3 {
                return Err(Error::Format(format!("bad CSV row '{line}'")));
            }
            let num = |s: &str| {
                s.trim()
                    .parse::<f64>()
                    .map_err(|_| Error::Format(format!("bad number '{s}'")))
            };
            let kind: CurveKind = cols[2].trim().parse()?;
            let point = (num(cols[0])?, num(cols[1])?);
            match curves.iter_mut().find(|(k, _)| *k == kind) {
                Some((_, pts)) => pts.push(point),
                None => curves.push((kind, vec![point])),
            }
        }
        curves.into_iter().map(|(k, p)| BerCurve::new(k, p)).collect()
    }
}

fn labelled(ub: &UnionBound) -> BoundKind {
    if ub.has_labels() {
        BoundKind::Bit
    } else {
        BoundKind::Symbol
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn csv_round_trip() {
        let a = BerCurve::new(CurveKind::BitUnionBound, vec![(0.0, 0.1), (1.0, 0.01)]).unwrap();
        let b = BerCurve::new(CurveKind::MonteCarlo, vec![(0.5, 0.2)]).unwrap();
        let text = format!("{}{}", a.to_csv(), b.csv_rows());
        let parsed = BerCurve::parse_csv(&text).unwrap();
        assert_eq!(parsed, vec![a, b]);
        assert!(text.starts_with("snr_db,value,kind\n"));
    }

    #[test]
    fn rejects_unsorted_grid() {
        assert!(BerCurve::new(CurveKind::MonteCarlo, vec![(1.0, 0.1), (1.0, 0.1)]).is_err());
        assert!(BerCurve::new(CurveKind::MonteCarlo, vec![(1.0, 1.5)]).is_err());
    }
}
