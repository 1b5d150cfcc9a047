use std::io::{self, BufRead, Write};

use super::FiltrationError;

/// Points of `R^d` under the Euclidean metric.
#[derive(Debug, Clone, PartialEq)]
pub struct PointCloud {
    dim: usize,
    coords: Vec<f64>,
}

impl PointCloud {
    pub fn new(points: Vec<Vec<f64>>) -> Result<Self, FiltrationError> {
        let dim = points.first().map_or(1, Vec::len);
        if dim == 0 {
            return Err(FiltrationError::InvalidParameter(
                "points must have at least one coordinate".into(),
            ));
        }
        let mut coords = Vec::with_capacity(points.len() * dim);
        for (i, p) in points.iter().enumerate() {
            if p.len() != dim {
                return Err(FiltrationError::InvalidParameter(format!(
                    "point {i} has {} coordinates, expected {dim}",
                    p.len()
                )));
            }
            if p.iter().any(|x| !x.is_finite()) {
                return Err(FiltrationError::InvalidParameter(format!(
                    "point {i} has a non-finite coordinate"
                )));
            }
            coords.extend_from_slice(p);
        }
        Ok(PointCloud { dim, coords })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn len(&self) -> usize {
        self.coords.len() / self.dim
    }

    pub fn is_empty(&self) -> bool {
        self.coords.is_empty()
    }

    pub fn point(&self, i: usize) -> &[f64] {
        &self.coords[i * self.dim..(i + 1) * self.dim]
    }

    pub fn dist2(&self, i: usize, j: usize) -> f64 {
        self.point(i)
            .iter()
            .zip(self.point(j))
            .map(|(a, b)| (a - b) * (a - b))
            .sum()
    }

    pub fn dist(&self, i: usize, j: usize) -> f64 {
        self.dist2(i, j).sqrt()
    }
}

/// Reads one point per line; blank lines and `#` comments are skipped.
pub fn parse_points<R: BufRead>(reader: R) -> Result<PointCloud, FiltrationError> {
    let mut points = Vec::new();
    let mut dim = None;
    for (n, line) in reader.lines().enumerate() {
        let line = line?;
        let t = line.trim();
        if t.is_empty() || t.starts_with('#') {
            continue;
        }
        let p = t
            .split_whitespace()
            .map(|tok| {
                tok.parse::<f64>().map_err(|e| FiltrationError::Parse {
                    line: n + 1,
                    msg: format!("bad coordinate {tok:?}: {e}"),
                })
            })
            .collect::<Result<Vec<_>, _>>()?;
        match dim {
            None => dim = Some(p.len()),
            Some(d) if d != p.len() => {
                return Err(FiltrationError::Parse {
                    line: n + 1,
                    msg: format!("expected {d} coordinates, found {}", p.len()),
                })
            }
            _ => {}
        }
        points.push(p);
    }
    PointCloud::new(points)
}

pub fn write_points<W: Write>(pc: &PointCloud, mut w: W) -> io::Result<()> {
    for i in 0..pc.len() {
        let line: Vec<String> = pc.point(i).iter().map(|x| x.to_string()).collect();
        writeln!(w, "{}", line.join(" "))?;
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_with_comments_and_blank_lines() {
        let pc = parse_points("# square\n0 0\n\n1 0\n1 1\n0 1\n".as_bytes()).unwrap();
        assert_eq!(pc.len(), 4);
        assert_eq!(pc.dim(), 2);
        assert_eq!(pc.dist(0, 2), 2f64.sqrt());
    }

    #[test]
    fn rejects_ragged_and_garbage() {
        assert!(matches!(
            parse_points("0 0\n1\n".as_bytes()),
            Err(FiltrationError::Parse { line: 2, .. })
        ));
        assert!(parse_points("0 x\n".as_bytes()).is_err());
    }

    #[test]
    fn write_then_parse_is_lossless() {
        let pc = PointCloud::new(vec![vec![0.1, -2.5e-7], vec![1.0 / 3.0, 7.0]]).unwrap();
        let mut buf = Vec::new();
        write_points(&pc, &mut buf).unwrap();
        assert_eq!(parse_points(buf.as_slice()).unwrap(), pc);
    }
}
