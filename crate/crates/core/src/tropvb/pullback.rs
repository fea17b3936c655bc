//! Pull-back of a bundle to a refinement of its fan.

use num_traits::Zero;

use super::{BundleError, Diagram, TropicalVectorBundle};
use crate::lattice::{arith, Fan, Rational};

impl TropicalVectorBundle {
    /// Image of a lattice point of `|Σ|` under the piecewise linear map of
    /// the diagram: barycentric interpolation of the adapted-basis columns
    /// on the smallest containing cone, extended by circuit minima.
    pub fn evaluate_map(&self, x: &[i64]) -> Result<Vec<Rational>, BundleError> {
        let cone = self.fan.min_containing_cone(&crate::lattice::RationalVector::from_ints(x))?;
        let rays = &self.fan.cone(cone).rays;
        let b = self.bases[cone];
        let m = self.matroid.ground_size();
        let mut coords = vec![Rational::zero(); m];
        if !rays.is_empty() {
            let cols: Vec<Vec<Rational>> = (0..self.fan.ambient_dim())
                .map(|i| rays.iter().map(|&r| arith::rat(self.fan.ray(r).0[i])).collect())
                .collect();
            let lambda = arith::solve_unique(&cols, &arith::lift_i64(x), rays.len())
                .ok_or(BundleError::Lattice(crate::lattice::LatticeError::NotInSupport))?;
            for e in b.iter() {
                coords[e] = rays.iter().zip(&lambda).map(|(&r, l)| l * arith::rat(self.diagram.entry(r, e))).sum();
            }
        }
        Ok(self.matroid.circuit_min_extension(b, &coords))
    }

    /// The bundle on a refinement `Σ'` whose row for each ray of `Σ'` is the
    /// image of its generator.
    pub fn pullback(&self, refined: &Fan) -> Result<TropicalVectorBundle, BundleError> {
        if !refined.is_refinement(&self.fan) {
            return Err(BundleError::NotARefinement);
        }
        let mut rows = Vec::with_capacity(refined.rays().len());
        for (i, v) in refined.rays().iter().enumerate() {
            if let Some(old) = self.fan.rays().iter().position(|w| w == v) {
                rows.push(self.diagram.row(old).to_vec());
                continue;
            }
            let img = self.evaluate_map(&v.0)?;
            let row: Option<Vec<i64>> = img
                .iter()
                .map(|q| if q.is_integer() { num_traits::ToPrimitive::to_i64(q.numer()) } else { None })
                .collect();
            rows.push(row.ok_or(BundleError::NonIntegralPullback { ray: i })?);
        }
        let diagram = Diagram::new(self.matroid.ground_size(), rows)?;
        TropicalVectorBundle::new(refined.clone(), self.matroid.clone(), diagram)
    }
}

#[cfg(test)]
mod tests {
    use crate::catalog;
    use crate::lattice::{LatticeBox, LatticeVector};

    #[test]
    fn identity_pullback() {
        let e = catalog::fano_bundle();
        let p = e.pullback(e.fan()).unwrap();
        assert_eq!(p.diagram(), e.diagram());
    }

    #[test]
    fn fano_stellar_row() {
        let e = catalog::fano_bundle();
        let fine = e.fan().stellar_subdivision(&LatticeVector(vec![1, 1])).unwrap();
        let p = e.pullback(&fine).unwrap();
        let new = fine.rays().iter().position(|v| v.0 == [1, 1]).unwrap();
        // B = {y1, y2, w}; the sum of the two rows on B is (2, 2, 2), and
        // every other column is a minimum over a fundamental circuit.
        let row = p.diagram().row(new).to_vec();
        assert_eq!([row[0], row[1], row[6]], [2, 2, 2]);
        let ext = e.matroid().circuit_min_extension(
            crate::matroid::ElementSet::from_elements(&[0, 1, 6]),
            &crate::lattice::arith::lift_i64(&[2, 2, 0, 0, 0, 0, 2]),
        );
        assert_eq!(crate::lattice::arith::lift_i64(&row), ext);
        for u in LatticeBox::cube(2, 4).points() {
            assert_eq!(p.euler_char_u(&u), e.euler_char_u(&u));
        }
    }

    #[test]
    fn rejects_non_refinement() {
        let e = catalog::u23_bundle();
        assert!(e.pullback(&catalog::p1xp1_fan()).is_err());
    }
}
