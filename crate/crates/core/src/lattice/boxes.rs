//! Axis-aligned integer boxes and their one-unit margin shells.

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LatticeBox {
    pub lo: Vec<i64>,
    pub hi: Vec<i64>,
}

/// Odometer over the integer points of a box.
pub struct BoxPoints {
    lo: Vec<i64>,
    hi: Vec<i64>,
    cur: Option<Vec<i64>>,
}

impl Iterator for BoxPoints {
    type Item = Vec<i64>;

    fn next(&mut self) -> Option<Vec<i64>> {
        let out = self.cur.clone()?;
        let mut next = out.clone();
        let mut i = next.len();
        loop {
            if i == 0 {
                self.cur = None;
                break;
            }
            i -= 1;
            if next[i] < self.hi[i] {
                next[i] += 1;
                self.cur = Some(next);
                break;
            }
            next[i] = self.lo[i];
        }
        Some(out)
    }
}

impl LatticeBox {
    pub fn new(lo: Vec<i64>, hi: Vec<i64>) -> Self {
        assert_eq!(lo.len(), hi.len(), "box corners must have equal length");
        LatticeBox { lo, hi }
    }

    /// The cube `[-k, k]^dim`.
    pub fn cube(dim: usize, k: i64) -> Self {
        LatticeBox::new(vec![-k; dim], vec![k; dim])
    }

    pub fn dim(&self) -> usize {
        self.lo.len()
    }

    pub fn is_empty(&self) -> bool {
        self.lo.iter().zip(&self.hi).any(|(a, b)| a > b)
    }

    pub fn contains(&self, p: &[i64]) -> bool {
        p.iter().zip(self.lo.iter().zip(&self.hi)).all(|(x, (a, b))| a <= x && x <= b)
    }

    pub fn len(&self) -> usize {
        if self.is_empty() {
            return 0;
        }
        self.lo.iter().zip(&self.hi).map(|(a, b)| (b - a + 1) as usize).product()
    }

    pub fn pad(&self, k: i64) -> Self {
        LatticeBox::new(self.lo.iter().map(|x| x - k).collect(), self.hi.iter().map(|x| x + k).collect())
    }

    /// Smallest box containing both.
    pub fn union(&self, other: &LatticeBox) -> Self {
        LatticeBox::new(
            self.lo.iter().zip(&other.lo).map(|(a, b)| *a.min(b)).collect(),
            self.hi.iter().zip(&other.hi).map(|(a, b)| *a.max(b)).collect(),
        )
    }

    pub fn points(&self) -> BoxPoints {
        let cur = if self.is_empty() { None } else { Some(self.lo.clone()) };
        BoxPoints { lo: self.lo.clone(), hi: self.hi.clone(), cur }
    }

    /// Points of the padded box `pad(1)` that are not in the box.
    pub fn shell(&self) -> impl Iterator<Item = Vec<i64>> + '_ {
        self.pad(1).points().filter(move |p| !self.contains(p))
    }
}
