//! Result types shared by the EFD, EWT and FDM decompositions.

use std::fmt;
use std::io::{self, Write};
use std::str::FromStr;

use serde::Serialize;

use crate::segmentation::{Band, BoundarySet};
use crate::spectral::{sample_times, Signal};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Method {
    Efd,
    Ewt,
    Fdm,
}

impl Method {
    pub const ALL: [Method; 3] = [Method::Efd, Method::Ewt, Method::Fdm];

    pub fn name(self) -> &'static str {
        match self {
            Method::Efd => "efd",
            Method::Ewt => "ewt",
            Method::Fdm => "fdm",
        }
    }
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Method {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "efd" => Ok(Method::Efd),
            "ewt" => Ok(Method::Ewt),
            "fdm" => Ok(Method::Fdm),
            other => Err(format!("unknown method '{other}' (expected efd, ewt or fdm)")),
        }
    }
}

/// One extracted component and the band it came from.
#[derive(Debug, Clone, PartialEq)]
pub struct Mode {
    pub samples: Vec<f64>,
    pub band: Band,
    /// 1-based position in ascending band order.
    pub label: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct DecompositionResult {
    pub method: Method,
    pub sample_rate: f64,
    /// Ascending by band.
    pub modes: Vec<Mode>,
    /// `X[0]`, the signal mean.
    pub dc_term: f64,
    /// `X[K/2]`, the coefficient of `(-1)^n`.
    pub nyquist_term: f64,
    /// Whether `dc_term` is already contained in `modes`.
    pub dc_in_modes: bool,
    /// Whether `nyquist_term` is already contained in `modes` (or in `discarded_tail`).
    pub nyquist_in_modes: bool,
    /// Content above the last boundary, excluded from every mode.
    pub discarded_tail: Vec<f64>,
    pub boundaries: BoundarySet,
}

impl DecompositionResult {
    pub fn len(&self) -> usize {
        self.discarded_tail.len()
    }

    pub fn is_empty(&self) -> bool {
        self.discarded_tail.is_empty()
    }

    /// Sum of modes and tail, plus the DC/Nyquist terms that were reported separately.
    pub fn reconstruct(&self) -> Vec<f64> {
        let mut out = self.discarded_tail.clone();
        for mode in &self.modes {
            for (o, s) in out.iter_mut().zip(&mode.samples) {
                *o += s;
            }
        }
        for (n, o) in out.iter_mut().enumerate() {
            if !self.dc_in_modes {
                *o += self.dc_term;
            }
            if !self.nyquist_in_modes {
                *o += if n % 2 == 0 { self.nyquist_term } else { -self.nyquist_term };
            }
        }
        out
    }

    /// Max-abs reconstruction error relative to the max-abs of `signal`.
    pub fn reconstruction_residual(&self, signal: &Signal) -> f64 {
        relative_max_error(&self.reconstruct(), signal.samples())
    }

    /// Energy (sum of squares) of the discarded tail.
    pub fn tail_energy(&self) -> f64 {
        self.discarded_tail.iter().map(|x| x * x).sum()
    }

    /// CSV with header `t,mode1,...,modeN`.
    pub fn write_modes_csv<W: Write>(&self, mut w: W) -> io::Result<()> {
        write!(w, "t")?;
        for m in &self.modes {
            write!(w, ",mode{}", m.label)?;
        }
        writeln!(w)?;
        for (n, t) in sample_times(self.len(), self.sample_rate).iter().enumerate() {
            write!(w, "{t}")?;
            for m in &self.modes {
                write!(w, ",{}", m.samples[n])?;
            }
            writeln!(w)?;
        }
        Ok(())
    }
}

/// `max|a - b| / max|b|`, or the absolute error when `b` is all zeros.
pub fn relative_max_error(a: &[f64], b: &[f64]) -> f64 {
    let err = a.iter().zip(b).map(|(x, y)| (x - y).abs()).fold(0.0, f64::max);
    let scale = b.iter().map(|y| y.abs()).fold(0.0, f64::max);
    if scale > 0.0 {
        err / scale
    } else {
        err
    }
}
