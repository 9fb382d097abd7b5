use proptest::prelude::*;

use superw::darboux::equivariant_darboux;
use superw::poisson::{find_symplectic_subspace, PoissonAlgebra};
use superw::rational::{q, Q};
use superw::supercore::{Monomial, SuperPoly};
use superw::wslice::{bundled_names, catalog_algebra, WContext};

/// Shifted Lie–Poisson algebra of a bundled algebra with `chi` multiplied by `scale`.
fn scaled(name: &str, scale: &Q) -> PoissonAlgebra {
    let ctx = WContext::new(&catalog_algebra(name).unwrap(), false).unwrap();
    let s = &ctx.setup;
    let chi: Vec<Q> = s.chi.iter().map(|c| c * scale).collect();
    PoissonAlgebra::lie_poisson(s.universe.clone(), &s.adapted.structure_list(), &chi, -2).unwrap()
}

fn element(p: &PoissonAlgebra, seeds: &[(u8, u8, u8, i8)], odd: bool) -> SuperPoly {
    let u = p.universe();
    let n = u.len();
    let mut out = SuperPoly::zero();
    for &(a, b, c, k) in seeds {
        let mut e = vec![0u16; n];
        for v in [a as usize % n, b as usize % (n + 1), c as usize % (n + 2)] {
            if v < n {
                e[v] = if u.is_odd(v) { 1 } else { e[v] + 1 };
            }
        }
        let m = Monomial::from_exponents(&e);
        if m.parity(u).is_odd() == odd && k != 0 {
            out.add_term(m, q(k as i64));
        }
    }
    out
}

fn seeds() -> impl Strategy<Value = Vec<(u8, u8, u8, i8)>> {
    prop::collection::vec((any::<u8>(), any::<u8>(), any::<u8>(), -3i8..=3), 1..4)
}

fn nonzero_rational() -> impl Strategy<Value = Q> {
    (prop_oneof![-5i64..=-1, 1i64..=5], 1i64..=4).prop_map(|(n, d)| Q::new(n.into(), d.into()))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn poisson_axioms_hold(
        which in 0usize..4,
        scale in nonzero_rational(),
        a in seeds(), b in seeds(), c in seeds(),
        pa: bool, pb: bool, pc: bool,
    ) {
        let p = scaled(bundled_names()[which], &scale);
        let (f, g, h) = (element(&p, &a, pa), element(&p, &b, pb), element(&p, &c, pc));
        prop_assert_eq!(p.axiom_violations(&f, &g, &h).unwrap(), Vec::<&str>::new());
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(6))]

    #[test]
    fn darboux_charts_close_for_square_scales(which in 0usize..3, root in nonzero_rational()) {
        // Odd self-pairings are normalized by a square root, so keep the scale a square.
        let name = ["sl2", "osp12", "sl21"][which];
        let p = scaled(name, &(&root * &root));
        let pi = p.bivector_at(&vec![Q::from_integer(0.into()); p.universe().len()]).unwrap();
        let v = find_symplectic_subspace(&pi).unwrap();
        let chart = equivariant_darboux(&p, &v, 4, 8).unwrap();
        prop_assert!(chart.residuals(&p).is_empty());
        prop_assert!(chart.inhomogeneous(&p).is_empty());
        prop_assert_eq!(chart.coordinate_elements().len(), v.dims().0 + v.dims().1);
    }
}

#[test]
fn non_square_odd_pairing_is_reported() {
    let p = scaled("osp12", &q(5));
    let pi = p.bivector_at(&vec![q(0); p.universe().len()]).unwrap();
    assert!(matches!(find_symplectic_subspace(&pi), Err(superw::Error::IrrationalNormalization(_))));
}

#[test]
fn mixed_parity_input_is_rejected() {
    let p = scaled("osp12", &q(1));
    let u = p.universe();
    let n = u.len();
    let odd = (0..n).find(|&i| u.is_odd(i)).unwrap();
    let even = (0..n).find(|&i| !u.is_odd(i)).unwrap();
    let mixed = SuperPoly::var(n, odd).add(&SuperPoly::var(n, even));
    assert!(p.axiom_violations(&mixed, &mixed, &mixed).is_err());
}

#[test]
fn broken_bracket_violates_jacobi() {
    let mut g = catalog_algebra("osp12").unwrap();
    let key = *g.structure.keys().next().unwrap();
    for c in g.structure.get_mut(&key).unwrap() {
        *c *= q(3);
    }
    assert!(!g.jacobi_violations().is_empty());
    assert!(g.validate().is_err());
}
