//! Validated point sets and the line-oriented point text format.

use std::fmt::Write as _;
use std::ops::Index;

use num_bigint::BigInt;
use num_rational::BigRational;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::hexgeom::{general_position_check, Point, Violation};
use crate::scalar::Scalar;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum PointSetError {
    #[error("point set not in general position: {0}")]
    InvalidPointSet(Violation),
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },
    #[error("could not restore general position after {attempts} perturbation attempts")]
    PerturbationFailed { attempts: usize },
}

#[derive(Clone, Debug, PartialEq)]
pub struct PointSet {
    points: Vec<Point>,
}

impl PointSet {
    pub fn new(points: Vec<Point>) -> Result<Self, PointSetError> {
        general_position_check(&points).map_err(PointSetError::InvalidPointSet)?;
        Ok(Self { points })
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn points(&self) -> &[Point] {
        &self.points
    }

    pub fn iter(&self) -> std::slice::Iter<'_, Point> {
        self.points.iter()
    }

    pub fn into_points(self) -> Vec<Point> {
        self.points
    }

    /// Parses the point text format without validating general position.
    pub fn parse_points(text: &str) -> Result<Vec<Point>, PointSetError> {
        let mut points = Vec::new();
        for (idx, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let err = |message: String| PointSetError::Parse { line: idx + 1, message };
            let tokens: Vec<&str> = line.split_whitespace().collect();
            if tokens.len() != 2 {
                return Err(err(format!("expected 2 tokens, found {}", tokens.len())));
            }
            let x: Scalar = tokens[0].parse().map_err(|e| err(format!("{e}")))?;
            let y: Scalar = tokens[1].parse().map_err(|e| err(format!("{e}")))?;
            points.push(Point::new(x, y));
        }
        Ok(points)
    }

    pub fn from_text(text: &str) -> Result<Self, PointSetError> {
        Self::new(Self::parse_points(text)?)
    }

    /// One `x y` line per point; `labels[i]`, when present, becomes a trailing comment.
    pub fn to_text(&self, labels: &[Option<String>]) -> String {
        let mut out = String::new();
        for (i, p) in self.points.iter().enumerate() {
            match labels.get(i).and_then(|l| l.as_deref()) {
                Some(l) => writeln!(out, "{} {} # {l}", p.x(), p.y()).unwrap(),
                None => writeln!(out, "{} {}", p.x(), p.y()).unwrap(),
            }
        }
        out
    }

    /// Moves every point by a seeded rational offset with coordinates in
    /// `[−magnitude, magnitude]` on a grid of step `magnitude / 2^20`, retrying
    /// until general position holds.
    pub fn perturbed(
        points: &[Point],
        magnitude: &BigRational,
        seed: u64,
    ) -> Result<Self, PointSetError> {
        const ATTEMPTS: usize = 32;
        let grid = 1i64 << 20;
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        for _ in 0..ATTEMPTS {
            let moved: Vec<Point> = points
                .iter()
                .map(|p| {
                    let mut offset = || {
                        let k: i64 = rng.gen_range(-grid..=grid);
                        Scalar::from_rational(magnitude * BigRational::new(BigInt::from(k), BigInt::from(grid)))
                    };
                    let dx = offset();
                    let dy = offset();
                    Point::new(p.x() + &dx, p.y() + &dy)
                })
                .collect();
            if let Ok(set) = Self::new(moved) {
                return Ok(set);
            }
        }
        Err(PointSetError::PerturbationFailed { attempts: ATTEMPTS })
    }
}

impl Index<usize> for PointSet {
    type Output = Point;
    fn index(&self, i: usize) -> &Point {
        &self.points[i]
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_and_print() {
        let text = "# header\n0 0\n1/2 -0.25 # labelled\n1/3+1/2*sqrt3 2\n";
        let set = PointSet::from_text(text).unwrap();
        assert_eq!(set.len(), 3);
        let back = PointSet::from_text(&set.to_text(&[])).unwrap();
        assert_eq!(back, set);
        let labelled = set.to_text(&[Some("t".into())]);
        assert!(labelled.starts_with("0 0 # t\n"));
    }

    #[test]
    fn parse_errors_name_the_line() {
        let err = PointSet::from_text("0 0\n1\n").unwrap_err();
        assert!(matches!(err, PointSetError::Parse { line: 2, .. }));
        assert!(matches!(PointSet::from_text("0 0\n1 0\n"), Err(PointSetError::InvalidPointSet(_))));
    }

    #[test]
    fn perturbation_restores_general_position() {
        let pts = PointSet::parse_points("0 0\n1 0\n2 0\n").unwrap();
        let m = BigRational::new(1.into(), 1000.into());
        let a = PointSet::perturbed(&pts, &m, 7).unwrap();
        let b = PointSet::perturbed(&pts, &m, 7).unwrap();
        assert_eq!(a, b);
    }
}
