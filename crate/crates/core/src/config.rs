use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geom::Point;
use crate::rat;

/// `M` color classes of points in `R^d`, each of odd cardinality.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ColoredPointConfig {
    pub dim: usize,
    #[serde(with = "rat::mat3")]
    pub colors: Vec<Vec<Point>>,
}

/// Position of a point inside a configuration.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct PointId {
    pub color: usize,
    pub index: usize,
}

impl ColoredPointConfig {
    pub fn new(dim: usize, colors: Vec<Vec<Point>>) -> Result<Self> {
        let c = ColoredPointConfig { dim, colors };
        c.validate()?;
        Ok(c)
    }

    pub fn validate(&self) -> Result<()> {
        let mut seen = std::collections::HashSet::new();
        for (j, class) in self.colors.iter().enumerate() {
            if class.len() % 2 == 0 {
                return Err(Error::InvalidInput(format!("color {j} has even cardinality {}", class.len())));
            }
            for p in class {
                if p.len() != self.dim {
                    return Err(Error::Dimension { expected: self.dim, got: p.len() });
                }
                if !seen.insert(p.clone()) {
                    return Err(Error::InvalidInput(format!("duplicate point in color {j}")));
                }
            }
        }
        Ok(())
    }

    pub fn num_colors(&self) -> usize {
        self.colors.len()
    }

    pub fn total_points(&self) -> usize {
        self.colors.iter().map(Vec::len).sum()
    }

    pub fn point(&self, id: PointId) -> &Point {
        &self.colors[id.color][id.index]
    }

    pub fn ids(&self) -> impl Iterator<Item = PointId> + '_ {
        self.colors
            .iter()
            .enumerate()
            .flat_map(|(c, pts)| (0..pts.len()).map(move |i| PointId { color: c, index: i }))
    }

    /// Index of `id` in the flattened point list.
    pub fn flat_index(&self, id: PointId) -> usize {
        self.colors[..id.color].iter().map(Vec::len).sum::<usize>() + id.index
    }

    pub fn flat_points(&self) -> Vec<Point> {
        self.colors.iter().flatten().cloned().collect()
    }

    pub fn with_point(&self, id: PointId, p: Point) -> Self {
        let mut c = self.clone();
        c.colors[id.color][id.index] = p;
        c
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rat::int;

    #[test]
    fn rejects_even_classes_and_duplicates() {
        let p = |x: i64| vec![int(x)];
        assert!(ColoredPointConfig::new(1, vec![vec![p(0), p(1)]]).is_err());
        assert!(ColoredPointConfig::new(1, vec![vec![p(0)], vec![p(0)]]).is_err());
        let c = ColoredPointConfig::new(1, vec![vec![p(0)], vec![p(1), p(2), p(3)]]).unwrap();
        assert_eq!(c.flat_index(PointId { color: 1, index: 2 }), 3);
        assert_eq!(c.ids().count(), 4);
    }
}
