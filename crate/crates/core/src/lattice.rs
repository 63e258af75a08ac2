//! Dense storage for values indexed by `(j, k)` inside an L1 ball.

/// Values on `{(j, k) : |j - j0| + |k - k0| <= radius}`, stored row by row.
#[derive(Clone, Debug)]
pub struct Diamond<T> {
    center: (i64, i64),
    radius: i64,
    row_offsets: Vec<usize>,
    cells: Vec<T>,
}

impl<T: Clone> Diamond<T> {
    pub fn new(center: (i64, i64), radius: i64, fill: T) -> Self {
        let radius = radius.max(0);
        let mut row_offsets = Vec::with_capacity(2 * radius as usize + 2);
        let mut total = 0usize;
        for dj in -radius..=radius {
            row_offsets.push(total);
            total += (2 * (radius - dj.abs()) + 1) as usize;
        }
        row_offsets.push(total);
        Self {
            center,
            radius,
            row_offsets,
            cells: vec![fill; total],
        }
    }
}

impl<T> Diamond<T> {
    pub fn center(&self) -> (i64, i64) {
        self.center
    }

    pub fn radius(&self) -> i64 {
        self.radius
    }

    pub fn contains(&self, j: i64, k: i64) -> bool {
        (j - self.center.0).abs() + (k - self.center.1).abs() <= self.radius
    }

    fn index(&self, j: i64, k: i64) -> Option<usize> {
        let dj = j - self.center.0;
        let dk = k - self.center.1;
        if dj.abs() + dk.abs() > self.radius {
            return None;
        }
        let row = (dj + self.radius) as usize;
        let half = self.radius - dj.abs();
        Some(self.row_offsets[row] + (dk + half) as usize)
    }

    pub fn get(&self, j: i64, k: i64) -> Option<&T> {
        self.index(j, k).map(|i| &self.cells[i])
    }

    pub fn get_mut(&mut self, j: i64, k: i64) -> Option<&mut T> {
        self.index(j, k).map(|i| &mut self.cells[i])
    }

    /// Panics if `(j, k)` is outside the diamond.
    pub fn set(&mut self, j: i64, k: i64, value: T) {
        let i = self
            .index(j, k)
            .unwrap_or_else(|| panic!("({j}, {k}) outside diamond of radius {}", self.radius));
        self.cells[i] = value;
    }

    /// All `(j, k)` in the diamond, row-major.
    pub fn sites(&self) -> impl Iterator<Item = (i64, i64)> + '_ {
        let (j0, k0) = self.center;
        let r = self.radius;
        (-r..=r).flat_map(move |dj| {
            let half = r - dj.abs();
            (-half..=half).map(move |dk| (j0 + dj, k0 + dk))
        })
    }

    /// Sites whose coordinate sum has the given parity (0 or 1).
    pub fn sites_with_parity(&self, parity: i64) -> impl Iterator<Item = (i64, i64)> + '_ {
        self.sites()
            .filter(move |(j, k)| (j + k).rem_euclid(2) == parity)
    }

    pub fn len(&self) -> usize {
        self.cells.len()
    }

    pub fn is_empty(&self) -> bool {
        self.cells.is_empty()
    }

    pub fn values(&self) -> impl Iterator<Item = &T> {
        self.cells.iter()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::collections::HashSet;

    #[test]
    fn indexing_is_a_bijection() {
        for r in 0..6 {
            let mut d = Diamond::new((2, -1), r, 0usize);
            let sites: Vec<_> = d.sites().collect();
            assert_eq!(sites.len(), d.len());
            assert_eq!(d.len() as i64, 2 * r * r + 2 * r + 1);
            let unique: HashSet<_> = sites.iter().copied().collect();
            assert_eq!(unique.len(), sites.len());
            for (i, &(j, k)) in sites.iter().enumerate() {
                d.set(j, k, i);
            }
            for (i, &(j, k)) in sites.iter().enumerate() {
                assert_eq!(d.get(j, k), Some(&i));
            }
        }
    }

    #[test]
    fn outside_is_none() {
        let d = Diamond::new((0, 0), 2, 1u8);
        assert!(d.get(2, 1).is_none());
        assert!(d.get(-3, 0).is_none());
        assert!(d.get(1, -1).is_some());
        assert!(!d.contains(0, 3));
    }
}
