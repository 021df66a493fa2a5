//! Finite truncations of spaces: the substrate for all brute-force work.

use crate::dist::ExtDist;
use crate::point::Point;
use crate::space::Space;
use crate::{Error, Result};
use std::collections::HashMap;
use std::sync::Arc;

/// A finite point set with a total exact metric and a distinguished base.
pub struct FiniteModel {
    points: Vec<Point>,
    index: HashMap<Point, usize>,
    base: usize,
    backend: Backend,
}

enum Backend {
    /// Distances come from the ambient space oracle.
    Space(Arc<Space>),
    /// Explicit row-major n*n matrix.
    Matrix(Vec<ExtDist>),
}

impl FiniteModel {
    /// Truncation of a space to an explicit point set. Every point must lie in
    /// the space and the base must be among them.
    pub fn from_space(space: Arc<Space>, points: Vec<Point>, base: Point) -> Result<FiniteModel> {
        for p in &points {
            if !space.contains(p) {
                return Err(Error::input(format!("point {p} is not in {}", space.name())));
            }
        }
        let index: HashMap<Point, usize> =
            points.iter().enumerate().map(|(i, p)| (p.clone(), i)).collect();
        if index.len() != points.len() {
            return Err(Error::input("duplicate points in truncation"));
        }
        let base = *index
            .get(&base)
            .ok_or_else(|| Error::input("base point missing from truncation"))?;
        Ok(FiniteModel { points, index, base, backend: Backend::Space(space) })
    }

    /// Explicit model from a distance matrix. Symmetry and identity of
    /// indiscernibles are always checked; the triangle inequality is checked
    /// exhaustively for models of up to 64 points.
    pub fn from_matrix(points: Vec<Point>, base: Point, matrix: Vec<ExtDist>) -> Result<FiniteModel> {
        let n = points.len();
        if matrix.len() != n * n {
            return Err(Error::input("distance matrix has wrong shape"));
        }
        for i in 0..n {
            for j in 0..n {
                let d = matrix[i * n + j];
                if d != matrix[j * n + i] {
                    return Err(Error::input("distance matrix is not symmetric"));
                }
                if (i == j) != d.is_zero() {
                    return Err(Error::input("identity of indiscernibles violated"));
                }
            }
        }
        if n <= 64 {
            for i in 0..n {
                for j in 0..n {
                    for k in 0..n {
                        if matrix[i * n + j] > matrix[i * n + k] + matrix[k * n + j] {
                            return Err(Error::input("triangle inequality violated"));
                        }
                    }
                }
            }
        }
        let index: HashMap<Point, usize> =
            points.iter().enumerate().map(|(i, p)| (p.clone(), i)).collect();
        if index.len() != n {
            return Err(Error::input("duplicate points in model"));
        }
        let base = *index
            .get(&base)
            .ok_or_else(|| Error::input("base point missing from model"))?;
        Ok(FiniteModel { points, index, base, backend: Backend::Matrix(matrix) })
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

    pub fn point(&self, i: usize) -> &Point {
        &self.points[i]
    }

    pub fn base(&self) -> &Point {
        &self.points[self.base]
    }

    pub fn base_idx(&self) -> usize {
        self.base
    }

    pub fn index_of(&self, p: &Point) -> Option<usize> {
        self.index.get(p).copied()
    }

    pub fn space(&self) -> Option<&Arc<Space>> {
        match &self.backend {
            Backend::Space(s) => Some(s),
            Backend::Matrix(_) => None,
        }
    }

    pub fn dist_idx(&self, i: usize, j: usize) -> ExtDist {
        match &self.backend {
            Backend::Space(s) => s.dist_unchecked(&self.points[i], &self.points[j]),
            Backend::Matrix(m) => m[i * self.points.len() + j],
        }
    }

    /// Distance between two model points; unknown points are input errors.
    pub fn dist(&self, p: &Point, q: &Point) -> Result<ExtDist> {
        let i = self.index_of(p).ok_or_else(|| Error::input(format!("unknown point {p}")))?;
        let j = self.index_of(q).ok_or_else(|| Error::input(format!("unknown point {q}")))?;
        Ok(self.dist_idx(i, j))
    }

    /// Restriction to a subset of point indices; base retained only if kept.
    pub fn restrict(&self, keep: &[usize], base: Option<usize>) -> Result<FiniteModel> {
        let points: Vec<Point> = keep.iter().map(|&i| self.points[i].clone()).collect();
        match &self.backend {
            Backend::Space(s) => {
                let base_pt = match base {
                    Some(b) => self.points[b].clone(),
                    None => {
                        if keep.contains(&self.base) {
                            self.base().clone()
                        } else {
                            return Err(Error::input("restriction drops the base point"));
                        }
                    }
                };
                FiniteModel::from_space(Arc::clone(s), points, base_pt)
            }
            Backend::Matrix(m) => {
                let n = self.points.len();
                let k = keep.len();
                let mut matrix = Vec::with_capacity(k * k);
                for &i in keep {
                    for &j in keep {
                        matrix.push(m[i * n + j]);
                    }
                }
                let base_pt = match base {
                    Some(b) => self.points[b].clone(),
                    None => self.base().clone(),
                };
                FiniteModel::from_matrix(points, base_pt, matrix)
            }
        }
    }
}

/// The closed ball of a space as a [`FiniteModel`]; the base is preserved.
/// An infinite radius is an input error.
pub fn ball(space: &Arc<Space>, r: ExtDist) -> Result<FiniteModel> {
    if !r.is_finite() {
        return Err(Error::input("ball radius must be finite"));
    }
    let points = space.enumerate(r)?;
    FiniteModel::from_space(Arc::clone(space), points, space.base().clone())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::space::Norm;

    #[test]
    fn ball_of_z() {
        let z = Arc::new(Space::line());
        let m = ball(&z, ExtDist::int(2)).unwrap();
        assert_eq!(m.len(), 5);
        assert_eq!(m.base(), &Point::int(0));
        assert_eq!(m.dist(&Point::int(-2), &Point::int(2)).unwrap(), ExtDist::int(4));
    }

    #[test]
    fn ball_rejects_infinite_radius() {
        let z = Arc::new(Space::line());
        assert!(ball(&z, ExtDist::Infinity).is_err());
    }

    #[test]
    fn grid_linf_ball_nine_points() {
        let z2 = Arc::new(Space::grid(2, Norm::Linf));
        assert_eq!(ball(&z2, ExtDist::int(1)).unwrap().len(), 9);
    }

    #[test]
    fn matrix_model_validation() {
        let pts = vec![Point::int(0), Point::int(1)];
        let ok = FiniteModel::from_matrix(
            pts.clone(),
            Point::int(0),
            vec![ExtDist::ZERO, ExtDist::int(1), ExtDist::int(1), ExtDist::ZERO],
        );
        assert!(ok.is_ok());
        let bad = FiniteModel::from_matrix(
            pts,
            Point::int(0),
            vec![ExtDist::ZERO, ExtDist::int(1), ExtDist::int(2), ExtDist::ZERO],
        );
        assert!(bad.is_err());
    }
}
