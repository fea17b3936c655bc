mod common;

use std::collections::BTreeSet;

use common::*;
use tropehrhart::catalog;
use tropehrhart::hrr::hrr_verify;
use tropehrhart::lattice::{rat, LatticeVector};
use tropehrhart::matroid::{ElementSet, Matroid};
use tropehrhart::taut::{flag_alternating_sum, FlagOfSubsets, TautologicalBundle};

fn sorted(v: &[[i64; 2]]) -> Vec<LatticeVector> {
    let mut out: Vec<LatticeVector> = v.iter().map(|x| lv(x)).collect();
    out.sort();
    out
}

fn cone_of(e: &tropehrhart::tropvb::TropicalVectorBundle, rays: &[usize]) -> usize {
    e.fan().cone_index(rays).unwrap()
}

#[test]
fn fano_totals() {
    let e = catalog::fano_bundle();
    assert_eq!(e.h0_total().unwrap(), 27);
    assert_eq!(e.euler_char_total().unwrap(), 27);
    let alpha = e.chain_alpha_verified().unwrap();
    assert_eq!(alpha.lattice_sum(&e.default_box().unwrap()).unwrap(), 27);
}

#[test]
fn fano_filtration_and_bases() {
    let e = catalog::fano_bundle();
    // y1, z1, w
    assert_eq!(e.klyachko_flat(0, 1), ElementSet::from_elements(&[0, 3, 6]));
    assert_eq!(e.klyachko_flat(0, 2), ElementSet::singleton(0));
    assert_eq!(e.klyachko_flat(0, -5), ElementSet::full(7));
    let s12 = cone_of(&e, &[0, 1]);
    assert_eq!(e.adapted_basis(s12), ElementSet::from_elements(&[0, 1, 6]));
    assert_eq!(e.h0_local(s12, &[0, 0]), 3);
    assert_eq!(e.h0_local(s12, &[2, 2]), 0);
    let mut chars = e.characters(s12).unwrap();
    chars.sort();
    assert_eq!(chars, sorted(&[[2, 0], [0, 2], [1, 1]]));
}

#[test]
fn fano_parliament_triangle() {
    let e = catalog::fano_bundle();
    let p = e.parliament_polytope(5).vertex_enumeration().unwrap();
    let got: BTreeSet<Vec<i64>> = p.vertices().iter().map(|v| v.to_lattice().unwrap().0).collect();
    let want: BTreeSet<Vec<i64>> = [vec![-1, 0], vec![0, 0], vec![0, -1]].into_iter().collect();
    assert_eq!(got, want);
}

#[test]
fn fano_branch_counts() {
    let e = catalog::fano_bundle();
    let dec = e.branch_decomposition().unwrap();
    let mut counts = Vec::new();
    for i in 0..dec.branches().len() {
        match dec.branch_polytope_points(i).unwrap() {
            Some(n) => counts.push(n as i64),
            None => counts.push(dec.inverse_route_chain(i).unwrap().lattice_sum_default().unwrap()),
        }
    }
    counts.sort();
    assert_eq!(counts, vec![-2, 10, 19]);
    assert_eq!(counts.iter().sum::<i64>(), 27);
}

#[test]
fn fano_hrr() {
    let r = hrr_verify(&catalog::fano_bundle()).unwrap();
    assert_eq!(r.lhs, rat(27));
    assert!(r.equal);
}

#[test]
fn u23_characters_and_resolution() {
    let e = catalog::u23_bundle();
    let s12 = cone_of(&e, &[0, 1]);
    let mut chars = e.characters(s12).unwrap();
    chars.sort();
    assert_eq!(chars, sorted(&[[1, 0], [0, 1]]));

    let res = e.split_resolution_unchecked(&[0, 0, 0]).unwrap();
    let pos = e.fan().maximal_cones().iter().position(|&m| m == s12).unwrap();
    assert_eq!(res.parts()[0].characters_at(pos), sorted(&[[1, 0], [1, 0], [0, 1], [0, 1], [0, 0], [0, 0]]));
    assert_eq!(res.parts()[1].characters_at(pos), sorted(&[[1, 0], [0, 1], [0, 0], [0, 0], [0, 0], [0, 0]]));
    for p in 0..e.fan().maximal_cones().len() {
        assert_eq!(res.parts()[2].characters_at(p), sorted(&[[0, 0], [0, 0]]));
    }
    assert!(e.k_class_identity(&res).unwrap());
    assert!(hrr_verify(&e).unwrap().equal);
}

#[test]
fn tautological_u23() {
    let t = TautologicalBundle::new(&Matroid::uniform(2, 3).unwrap()).unwrap();
    let c = t.chi_u(&[1, 0, 0]).unwrap();
    assert_eq!((c.closed_form, c.generic), (1, 1));
    assert_eq!(t.chi_by_codim(&[1, 0, 0]), vec![10, 11, 2]);
    assert_eq!(t.h0_global(&[1, 0, 0]).unwrap().generic, 1);
    assert_eq!(t.h0_global(&[1, 1, -1]).unwrap().generic, 0);
    let flag = FlagOfSubsets::new(3, vec![ElementSet::from_elements(&[0]), ElementSet::from_elements(&[0, 1]), ElementSet::full(3)])
        .unwrap();
    assert_eq!(t.h0_local(&flag, &[1, 0, 0]).unwrap().generic, 1);
    assert_eq!(t.h0_local(&flag, &[0, 0, 1]).unwrap().generic, 2);
    assert!(t.vanishing_check(3).all_equal);
}

#[test]
fn flag_lemma() {
    assert_eq!(flag_alternating_sum(1), -1);
    assert_eq!(flag_alternating_sum(2), 1);
    assert_eq!(flag_alternating_sum(5), -1);
}

#[test]
fn line_bundles_on_p1() {
    for d in 0..=5 {
        let e = catalog::line_bundle_p1(d);
        assert_eq!(e.euler_char_total().unwrap(), d + 1);
        let r = hrr_verify(&e).unwrap();
        assert_eq!(r.lhs, rat(d + 1));
    }
}
