//! Standard fans, matroids and bundles.

use crate::lattice::{Fan, LatticeVector};
use crate::matroid::{ElementSet, Matroid};
use crate::tropvb::{Diagram, TropicalVectorBundle};

fn lv(v: &[i64]) -> LatticeVector {
    LatticeVector(v.to_vec())
}

/// Rays `1, −1`.
pub fn p1_fan() -> Fan {
    Fan::new(1, vec![lv(&[1]), lv(&[-1])], vec![vec![0], vec![1]]).expect("valid fan")
}

/// Rays `e1, e2, −e1−e2`.
pub fn p2_fan() -> Fan {
    Fan::new(2, vec![lv(&[1, 0]), lv(&[0, 1]), lv(&[-1, -1])], vec![vec![0, 1], vec![1, 2], vec![0, 2]])
        .expect("valid fan")
}

/// Rays `e1, e2, −e1, −e2`.
pub fn p1xp1_fan() -> Fan {
    Fan::new(
        2,
        vec![lv(&[1, 0]), lv(&[0, 1]), lv(&[-1, 0]), lv(&[0, -1])],
        vec![vec![0, 1], vec![1, 2], vec![2, 3], vec![0, 3]],
    )
    .expect("valid fan")
}

/// Rays `e1, e2, e3, −e1−e2−e3`.
pub fn p3_fan() -> Fan {
    let rays = vec![lv(&[1, 0, 0]), lv(&[0, 1, 0]), lv(&[0, 0, 1]), lv(&[-1, -1, -1])];
    Fan::new(3, rays, vec![vec![0, 1, 2], vec![0, 1, 3], vec![0, 2, 3], vec![1, 2, 3]]).expect("valid fan")
}

/// Elements `y1, y2, y3, z1, z2, z3, w`.
pub const FANO_LABELS: [&str; 7] = ["y1", "y2", "y3", "z1", "z2", "z3", "w"];

/// Lines of the Fano plane on [`FANO_LABELS`].
pub const FANO_LINES: [[usize; 3]; 7] = [[0, 1, 5], [0, 2, 4], [1, 2, 3], [0, 3, 6], [1, 4, 6], [2, 5, 6], [3, 4, 5]];

pub fn fano_matroid() -> Matroid {
    let lines: Vec<ElementSet> = FANO_LINES.iter().map(|l| ElementSet::from_elements(l)).collect();
    let bases: Vec<Vec<usize>> = crate::lattice::arith::combinations(7, 3)
        .into_iter()
        .filter(|t| !lines.contains(&ElementSet::from_elements(t)))
        .collect();
    Matroid::new(7, &bases).expect("Fano plane is a matroid")
}

pub fn fano_diagram() -> Diagram {
    Diagram::new(
        7,
        vec![vec![2, 0, 0, 1, 0, 0, 1], vec![0, 2, 0, 0, 1, 0, 1], vec![0, 0, 2, 0, 0, 1, 1]],
    )
    .expect("rectangular")
}

/// The rank-3 Fano plane bundle on `P²`.
pub fn fano_bundle() -> TropicalVectorBundle {
    TropicalVectorBundle::new(p2_fan(), fano_matroid(), fano_diagram()).expect("valid bundle")
}

/// `U_{2,3}` on `P²` with diagram the identity.
pub fn u23_bundle() -> TropicalVectorBundle {
    let d = Diagram::new(3, vec![vec![1, 0, 0], vec![0, 1, 0], vec![0, 0, 1]]).expect("rectangular");
    TropicalVectorBundle::new(p2_fan(), Matroid::uniform(2, 3).expect("uniform"), d).expect("valid bundle")
}

/// Rank-one bundle with support numbers `z`.
pub fn line_bundle(fan: Fan, z: &[i64]) -> TropicalVectorBundle {
    let d = Diagram::new(1, z.iter().map(|&x| vec![x]).collect()).expect("rectangular");
    TropicalVectorBundle::new(fan, Matroid::uniform(1, 1).expect("uniform"), d).expect("valid bundle")
}

/// `O(d)` on `P¹`, with sections `[0, d]`.
pub fn line_bundle_p1(d: i64) -> TropicalVectorBundle {
    line_bundle(p1_fan(), &[d, 0])
}

/// Rank `r` bundle on the free matroid with zero diagram.
pub fn trivial_bundle(fan: Fan, r: usize) -> TropicalVectorBundle {
    let d = Diagram::new(r, vec![vec![0; r]; fan.rays().len()]).expect("rectangular");
    TropicalVectorBundle::new(fan, Matroid::uniform(r, r).expect("uniform"), d).expect("valid bundle")
}
