//! Persistence diagrams of zigzag filtrations.
//!
//! Indices are input arrow numbers (1-based). An interval `(dim, b, d)` is a
//! class alive in the complexes `K_b, ..., K_{d-1}`, where `K_t` is the
//! complex right after arrow `t`; `d = End` means it is still alive after
//! the last arrow.

use std::fmt;
use std::io::{self, BufRead, Write};
use std::str::FromStr;

use thiserror::Error;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Death {
    Arrow(usize),
    End,
}

impl fmt::Display for Death {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Death::Arrow(a) => write!(f, "{a}"),
            Death::End => write!(f, "inf"),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Interval {
    pub dim: usize,
    pub birth: usize,
    pub death: Death,
}

impl Interval {
    pub fn new(dim: usize, birth: usize, death: Death) -> Self {
        Interval { dim, birth, death }
    }

    pub fn finite(dim: usize, birth: usize, death: usize) -> Self {
        Interval::new(dim, birth, Death::Arrow(death))
    }

    pub fn infinite(dim: usize, birth: usize) -> Self {
        Interval::new(dim, birth, Death::End)
    }

    /// Whether the class is alive in `K_index`.
    pub fn contains(&self, index: usize) -> bool {
        self.birth <= index
            && match self.death {
                Death::Arrow(d) => index < d,
                Death::End => true,
            }
    }

    /// Number of complexes the class is alive in, given `n` arrows in total.
    pub fn span(&self, n: usize) -> usize {
        match self.death {
            Death::Arrow(d) => d - self.birth,
            Death::End => n + 1 - self.birth,
        }
    }
}

impl fmt::Display for Interval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} {} {}", self.dim, self.birth, self.death)
    }
}

#[derive(Debug, Error)]
pub enum DiagramParseError {
    #[error("line {line}: {msg}")]
    Malformed { line: usize, msg: String },
    #[error(transparent)]
    Io(#[from] io::Error),
}

impl FromStr for Interval {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let parts: Vec<&str> = s.split_whitespace().collect();
        if parts.len() != 3 {
            return Err(format!("expected `dim birth death`, got {s:?}"));
        }
        let dim = parts[0].parse().map_err(|e| format!("dim: {e}"))?;
        let birth = parts[1].parse().map_err(|e| format!("birth: {e}"))?;
        let death = match parts[2] {
            "inf" => Death::End,
            d => Death::Arrow(d.parse().map_err(|e| format!("death: {e}"))?),
        };
        Ok(Interval { dim, birth, death })
    }
}

/// Multiset of intervals, kept sorted by (dim, birth, death).
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash)]
pub struct PersistenceDiagram {
    intervals: Vec<Interval>,
}

impl PersistenceDiagram {
    pub fn new(mut intervals: Vec<Interval>) -> Self {
        intervals.sort_unstable();
        PersistenceDiagram { intervals }
    }

    pub fn intervals(&self) -> &[Interval] {
        &self.intervals
    }

    pub fn len(&self) -> usize {
        self.intervals.len()
    }

    pub fn is_empty(&self) -> bool {
        self.intervals.is_empty()
    }

    pub fn in_dim(&self, dim: usize) -> impl Iterator<Item = &Interval> {
        self.intervals.iter().filter(move |i| i.dim == dim)
    }

    /// Number of intervals alive in `K_index`.
    pub fn alive_at(&self, index: usize) -> usize {
        self.intervals.iter().filter(|i| i.contains(index)).count()
    }

    /// The diagram of the first `len` arrows, obtained by cutting every
    /// interval to that prefix.
    pub fn clip(&self, len: usize) -> PersistenceDiagram {
        let intervals = self
            .intervals
            .iter()
            .filter(|i| i.birth <= len)
            .map(|i| {
                let death = match i.death {
                    Death::Arrow(d) if d <= len => Death::Arrow(d),
                    _ => Death::End,
                };
                Interval { death, ..*i }
            })
            .collect();
        PersistenceDiagram::new(intervals)
    }

    pub fn write_to<W: Write>(&self, mut w: W) -> io::Result<()> {
        for i in &self.intervals {
            writeln!(w, "{i}")?;
        }
        Ok(())
    }

    pub fn to_text(&self) -> String {
        let mut buf = Vec::new();
        self.write_to(&mut buf).expect("writing to a Vec cannot fail");
        String::from_utf8(buf).expect("ascii")
    }

    pub fn read_from<R: BufRead>(r: R) -> Result<Self, DiagramParseError> {
        let mut out = Vec::new();
        for (n, line) in r.lines().enumerate() {
            let line = line?;
            let t = line.trim();
            if t.is_empty() || t.starts_with('#') {
                continue;
            }
            out.push(t.parse().map_err(|msg| DiagramParseError::Malformed {
                line: n + 1,
                msg,
            })?);
        }
        Ok(PersistenceDiagram::new(out))
    }
}

impl FromIterator<Interval> for PersistenceDiagram {
    fn from_iter<T: IntoIterator<Item = Interval>>(iter: T) -> Self {
        PersistenceDiagram::new(iter.into_iter().collect())
    }
}

/// Outcome of a multiset comparison of two diagrams.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum DiagramComparison {
    Equal,
    /// `missing`: in the first diagram only; `extra`: in the second only.
    Differ {
        missing: Vec<Interval>,
        extra: Vec<Interval>,
    },
}

impl DiagramComparison {
    pub fn is_equal(&self) -> bool {
        matches!(self, DiagramComparison::Equal)
    }
}

impl fmt::Display for DiagramComparison {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            DiagramComparison::Equal => write!(f, "equal"),
            DiagramComparison::Differ { missing, extra } => {
                for i in missing {
                    writeln!(f, "missing ({i})")?;
                }
                for i in extra {
                    writeln!(f, "extra ({i})")?;
                }
                Ok(())
            }
        }
    }
}

/// Multiset difference of two diagrams.
pub fn compare_diagrams(a: &PersistenceDiagram, b: &PersistenceDiagram) -> DiagramComparison {
    let (x, y) = (&a.intervals, &b.intervals);
    let (mut i, mut j) = (0, 0);
    let (mut missing, mut extra) = (Vec::new(), Vec::new());
    while i < x.len() || j < y.len() {
        match (x.get(i), y.get(j)) {
            (Some(p), Some(q)) if p == q => {
                i += 1;
                j += 1;
            }
            (Some(p), Some(q)) if p < q => {
                missing.push(*p);
                i += 1;
            }
            (Some(_), Some(q)) => {
                extra.push(*q);
                j += 1;
            }
            (Some(p), None) => {
                missing.push(*p);
                i += 1;
            }
            (None, Some(q)) => {
                extra.push(*q);
                j += 1;
            }
            (None, None) => unreachable!(),
        }
    }
    if missing.is_empty() && extra.is_empty() {
        DiagramComparison::Equal
    } else {
        DiagramComparison::Differ { missing, extra }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn text_format_is_sorted_and_uses_inf() {
        let d = PersistenceDiagram::new(vec![
            Interval::finite(1, 6, 7),
            Interval::infinite(0, 1),
            Interval::finite(0, 2, 4),
        ]);
        assert_eq!(d.to_text(), "0 1 inf\n0 2 4\n1 6 7\n");
        let back = PersistenceDiagram::read_from(d.to_text().as_bytes()).unwrap();
        assert_eq!(back, d);
    }

    #[test]
    fn finite_deaths_sort_before_end() {
        assert!(Death::Arrow(usize::MAX) < Death::End);
    }

    #[test]
    fn compare_examples() {
        let d = PersistenceDiagram::new(vec![Interval::finite(0, 2, 3)]);
        assert!(compare_diagrams(&d, &d).is_equal());
        let e = PersistenceDiagram::default();
        let one = PersistenceDiagram::new(vec![Interval::infinite(0, 1)]);
        assert_eq!(
            compare_diagrams(&e, &one),
            DiagramComparison::Differ {
                missing: vec![],
                extra: vec![Interval::infinite(0, 1)]
            }
        );
    }

    #[test]
    fn clip_cuts_to_prefix() {
        let d = PersistenceDiagram::new(vec![
            Interval::infinite(0, 1),
            Interval::finite(0, 2, 3),
            Interval::finite(1, 4, 9),
            Interval::finite(0, 6, 7),
        ]);
        assert_eq!(
            d.clip(5),
            PersistenceDiagram::new(vec![
                Interval::infinite(0, 1),
                Interval::finite(0, 2, 3),
                Interval::infinite(1, 4),
            ])
        );
    }

    #[test]
    fn containment() {
        let i = Interval::finite(0, 2, 4);
        assert!(!i.contains(1) && i.contains(2) && i.contains(3) && !i.contains(4));
        assert_eq!(i.span(10), 2);
        assert_eq!(Interval::infinite(0, 3).span(10), 8);
    }
}
