use std::fmt;
use std::io::{self, Write};
use std::str::FromStr;

use crate::error::Error;

/// Schema line written at the top of every ledger CSV.
pub const LEDGER_CSV_HEADER: &str = "# dyngal ledger v1";

/// Kind of projector event a ledger entry records.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum LedgerTag {
    /// Projection of the initial condition onto the initial subspace.
    Initial,
    /// First zeroing after a projector switches on.
    Jump,
    /// Later zeroings while a punctual filter stays active.
    Rezero,
    /// Energy removed by truncating back to the dealiased band after a wavelet projection.
    Dealias,
    /// Coefficients discarded by CVS thresholding.
    Cvs,
}

impl LedgerTag {
    pub fn name(self) -> &'static str {
        match self {
            Self::Initial => "initial",
            Self::Jump => "jump",
            Self::Rezero => "rezero",
            Self::Dealias => "dealias",
            Self::Cvs => "cvs",
        }
    }
}

impl fmt::Display for LedgerTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for LedgerTag {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Ok(match s {
            "initial" => Self::Initial,
            "jump" => Self::Jump,
            "rezero" => Self::Rezero,
            "dealias" => Self::Dealias,
            "cvs" => Self::Cvs,
            other => return Err(Error::Argument(format!("unknown ledger tag '{other}'"))),
        })
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct LedgerEntry {
    pub t: f64,
    pub loss: f64,
    pub tag: LedgerTag,
    pub description: String,
}

/// Running account of the energy removed at projector discontinuities,
/// `sum_i ||(1 - P(t_i+)) u(t_i)||^2`.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct DissipationLedger {
    entries: Vec<LedgerEntry>,
    cumulative: f64,
}

impl DissipationLedger {
    pub fn new() -> Self {
        Self::default()
    }

    /// Appends a loss. Negative values (round-off on a no-op projection) are clamped to zero
    /// and zero losses are not stored. Returns whether an entry was added.
    pub fn record(&mut self, t: f64, loss: f64, tag: LedgerTag, description: impl Into<String>) -> bool {
        if !(loss > 0.0) {
            return false;
        }
        self.cumulative += loss;
        self.entries.push(LedgerEntry {
            t,
            loss,
            tag,
            description: description.into(),
        });
        true
    }

    pub fn entries(&self) -> &[LedgerEntry] {
        &self.entries
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn cumulative(&self) -> f64 {
        self.cumulative
    }

    /// Sum of all losses carrying `tag`.
    pub fn total(&self, tag: LedgerTag) -> f64 {
        self.entries.iter().filter(|e| e.tag == tag).map(|e| e.loss).sum()
    }

    /// Cumulative loss over entries with `t <= t_max`.
    pub fn cumulative_until(&self, t_max: f64) -> f64 {
        self.entries.iter().take_while(|e| e.t <= t_max).map(|e| e.loss).sum()
    }

    pub fn first(&self, tag: LedgerTag) -> Option<&LedgerEntry> {
        self.entries.iter().find(|e| e.tag == tag)
    }

    /// Writes `t,loss,cumulative,tag` rows after the schema line. Floats carry 17
    /// significant digits.
    pub fn write_csv<W: Write>(&self, mut out: W) -> io::Result<()> {
        writeln!(out, "{LEDGER_CSV_HEADER}")?;
        writeln!(out, "t,loss,cumulative,tag")?;
        let mut running = 0.0;
        for e in &self.entries {
            running += e.loss;
            writeln!(out, "{:.16e},{:.16e},{:.16e},{}", e.t, e.loss, running, e.tag)?;
        }
        Ok(())
    }
}
