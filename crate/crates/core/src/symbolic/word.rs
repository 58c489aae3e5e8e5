use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use super::SymbolicError;
use crate::families::Family;

/// An eventually periodic word over {1..n}: preperiod followed by the period
/// repeated forever. An empty period makes it a finite word.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct ItineraryWord {
    pub preperiod: Vec<u8>,
    pub period: Vec<u8>,
}

fn primitive(period: &[u8]) -> Vec<u8> {
    let n = period.len();
    for p in 1..=n {
        if n.is_multiple_of(p) && (p..n).all(|k| period[k] == period[k - p]) {
            return period[..p].to_vec();
        }
    }
    period.to_vec()
}

impl ItineraryWord {
    /// Normal form: primitive period, shortest preperiod.
    pub fn new(mut preperiod: Vec<u8>, period: Vec<u8>) -> Self {
        let mut period = primitive(&period);
        while let (Some(&a), Some(&b)) = (preperiod.last(), period.last()) {
            if a != b {
                break;
            }
            preperiod.pop();
            period.rotate_right(1);
        }
        ItineraryWord { preperiod, period }
    }

    pub fn finite(symbols: Vec<u8>) -> Self {
        ItineraryWord { preperiod: symbols, period: Vec::new() }
    }

    pub fn periodic(period: Vec<u8>) -> Self {
        Self::new(Vec::new(), period)
    }

    pub fn is_periodic_tail(&self) -> bool {
        !self.period.is_empty()
    }

    /// k-th symbol, 0-based; None past the end of a finite word.
    pub fn symbol(&self, k: usize) -> Option<u8> {
        if k < self.preperiod.len() {
            Some(self.preperiod[k])
        } else if self.period.is_empty() {
            None
        } else {
            Some(self.period[(k - self.preperiod.len()) % self.period.len()])
        }
    }

    /// The first `len` symbols (fewer for a short finite word).
    pub fn prefix(&self, len: usize) -> Vec<u8> {
        (0..len).map_while(|k| self.symbol(k)).collect()
    }

    /// One-sided shift σ.
    pub fn shift(&self) -> Self {
        if !self.preperiod.is_empty() {
            ItineraryWord { preperiod: self.preperiod[1..].to_vec(), period: self.period.clone() }
        } else {
            let mut p = self.period.clone();
            let k = 1.min(p.len());
            p.rotate_left(k);
            ItineraryWord { preperiod: Vec::new(), period: p }
        }
    }

    pub fn max_symbol(&self) -> u8 {
        self.preperiod.iter().chain(&self.period).copied().max().unwrap_or(0)
    }

    pub fn validate(&self, n: usize) -> Result<(), SymbolicError> {
        if self.preperiod.is_empty() && self.period.is_empty() {
            return Err(SymbolicError::BadWord("empty word".into()));
        }
        match self.preperiod.iter().chain(&self.period).find(|&&s| s == 0 || s as usize > n) {
            Some(s) => Err(SymbolicError::BadWord(format!("symbol {s} outside 1..{n}"))),
            None => Ok(()),
        }
    }
}

impl fmt::Display for ItineraryWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for s in &self.preperiod {
            write!(f, "{s}")?;
        }
        if !self.period.is_empty() {
            write!(f, "(")?;
            for s in &self.period {
                write!(f, "{s}")?;
            }
            write!(f, ")")?;
        }
        Ok(())
    }
}

/// "11(33)" is 11 followed by 33 repeated; "1212" is a finite word.
impl FromStr for ItineraryWord {
    type Err = SymbolicError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let bad = || SymbolicError::BadWord(s.to_string());
        let digits = |t: &str| -> Result<Vec<u8>, SymbolicError> {
            t.chars().map(|c| c.to_digit(10).map(|d| d as u8).ok_or_else(bad)).collect()
        };
        let s = s.trim();
        match s.find('(') {
            None => Ok(ItineraryWord::finite(digits(s)?)),
            Some(open) => {
                let rest = s[open + 1..].strip_suffix(')').ok_or_else(bad)?;
                let period = digits(rest)?;
                if period.is_empty() {
                    return Err(bad());
                }
                Ok(ItineraryWord::new(digits(&s[..open])?, period))
            }
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Verdict {
    Quasicircle,
    NotQuasicircle,
}

/// Whether the component with itinerary `word` is a quasicircle. Only the
/// primitive period matters: for P the cusped case is the period 1; for Q also
/// the period n; for R the alternating period 1n (up to rotation).
pub fn classify_itinerary(family: Family, n: usize, word: &ItineraryWord) -> Result<Verdict, SymbolicError> {
    word.validate(n)?;
    if !word.is_periodic_tail() {
        return Err(SymbolicError::Undecidable);
    }
    let p = primitive(&word.period);
    let nn = n as u8;
    let unbounded = match family {
        Family::HyperbolicF => false,
        Family::P => p == [1],
        Family::Q => p == [1] || p == [nn],
        Family::R => p == [1, nn] || p == [nn, 1],
    };
    Ok(if unbounded { Verdict::NotQuasicircle } else { Verdict::Quasicircle })
}

/// A word given by its run structure: `symbol`^{l_1} `separator` `symbol`^{l_2}
/// `separator` …, with lengths `lengths` and then, after the listed ones, each run
/// `growth` longer than the previous (`growth` = 0 repeats the last run forever).
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RunLengthSequence {
    pub symbol: u8,
    pub separator: u8,
    pub lengths: Vec<u64>,
    pub growth: u64,
}

impl RunLengthSequence {
    pub fn run(&self, k: usize) -> u64 {
        match self.lengths.get(k) {
            Some(&l) => l,
            None => {
                let last = self.lengths.last().copied().unwrap_or(1);
                last + self.growth * (k + 1 - self.lengths.len()) as u64
            }
        }
    }

    /// The first `len` symbols.
    pub fn prefix(&self, len: usize) -> Vec<u8> {
        let mut out = Vec::with_capacity(len);
        let mut k = 0;
        while out.len() < len {
            for _ in 0..self.run(k) {
                out.push(self.symbol);
            }
            out.push(self.separator);
            k += 1;
        }
        out.truncate(len);
        out
    }
}

/// Classification from the run structure, which also decides words with no
/// periodic tail: unbounded runs of a symbol that matters for the family give
/// NotQuasicircle.
pub fn classify_run_lengths(family: Family, n: usize, seq: &RunLengthSequence) -> Result<Verdict, SymbolicError> {
    let nn = n as u8;
    for s in [seq.symbol, seq.separator] {
        if s == 0 || s > nn {
            return Err(SymbolicError::BadWord(format!("symbol {s} outside 1..{n}")));
        }
    }
    if seq.growth == 0 {
        let mut pre = Vec::new();
        for &l in &seq.lengths[..seq.lengths.len().saturating_sub(1)] {
            pre.extend(std::iter::repeat_n(seq.symbol, l as usize));
            pre.push(seq.separator);
        }
        let mut period: Vec<u8> = std::iter::repeat_n(seq.symbol, seq.run(seq.lengths.len()) as usize).collect();
        period.push(seq.separator);
        return classify_itinerary(family, n, &ItineraryWord::new(pre, period));
    }
    let matters = match family {
        Family::HyperbolicF | Family::R => false,
        Family::P => seq.symbol == 1,
        Family::Q => seq.symbol == 1 || seq.symbol == nn,
    };
    Ok(if matters { Verdict::NotQuasicircle } else { Verdict::Quasicircle })
}
