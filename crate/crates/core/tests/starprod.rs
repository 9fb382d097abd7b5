use num_traits::Zero;
use proptest::prelude::*;

use superw::poisson::PoissonAlgebra;
use superw::rational::{q, qf, Q};
use superw::starprod::{hbar_saturate, homogenize, ideal_contains, rees_inverse, rees_map, StarAlgebra};
use superw::supercore::{Monomial, Parity, SuperPoly, TruncatedSeries, Universe};
use superw::wslice::{catalog_algebra, WContext};

fn weyl() -> StarAlgebra {
    let u = Universe::from_spec(&[("q", Parity::Even, 1), ("p", Parity::Even, 1)]);
    StarAlgebra::from_poisson(&PoissonAlgebra::symplectic(u, &[(0, 1, q(1))], -2).unwrap()).unwrap()
}

fn clifford() -> StarAlgebra {
    let u = Universe::from_spec(&[("t", Parity::Odd, 1)]);
    StarAlgebra::from_poisson(&PoissonAlgebra::symplectic(u, &[(0, 0, q(1))], -2).unwrap()).unwrap()
}

/// Unshifted Lie–Poisson sl2 with all weights 2, quantized.
fn sl2() -> StarAlgebra {
    let g = catalog_algebra("sl2").unwrap();
    let u = Universe::from_spec(&[("e", Parity::Even, 2), ("h", Parity::Even, 2), ("f", Parity::Even, 2)]);
    let p = PoissonAlgebra::lie_poisson(u, &g.structure_list(), &[Q::zero(), Q::zero(), Q::zero()], -2).unwrap();
    StarAlgebra::from_poisson(&p).unwrap()
}

fn var(s: &StarAlgebra, name: &str) -> SuperPoly {
    let u = s.universe();
    SuperPoly::var(u.len(), u.find(name).unwrap())
}

fn star(s: &StarAlgebra, a: &SuperPoly, b: &SuperPoly) -> SuperPoly {
    s.star_poly(a, b, u32::MAX)
}

fn hbar2(s: &StarAlgebra) -> SuperPoly {
    s.hbar_power(2)
}

#[test]
fn weyl_commutator_is_hbar_squared() {
    let s = weyl();
    let (qv, pv) = (var(&s, "q"), var(&s, "p"));
    let comm = star(&s, &qv, &pv).sub(&star(&s, &pv, &qv));
    assert_eq!(comm, hbar2(&s));
    // Normal ordering puts q before p.
    assert_eq!(star(&s, &qv, &pv), qv.mul(&pv, s.universe(), u32::MAX));
}

#[test]
fn weyl_reordering_of_a_square() {
    let s = weyl();
    let u = s.universe();
    let (qv, pv) = (var(&s, "q"), var(&s, "p"));
    // p * q^2 = q^2 p - 2 hbar^2 q.
    let q2 = qv.mul(&qv, u, u32::MAX);
    let lhs = star(&s, &pv, &q2);
    let rhs = q2.mul(&pv, u, u32::MAX).sub(&hbar2(&s).mul(&qv, u, u32::MAX).scale(&q(2)));
    assert_eq!(lhs, rhs);
}

#[test]
fn clifford_square_is_half_hbar_squared() {
    let s = clifford();
    let t = var(&s, "t");
    assert_eq!(star(&s, &t, &t), hbar2(&s).scale(&qf(1, 2)));
}

#[test]
fn sl2_commutator_gives_h() {
    let s = sl2();
    let u = s.universe();
    let (e, h, f) = (var(&s, "e"), var(&s, "h"), var(&s, "f"));
    let comm = star(&s, &e, &f).sub(&star(&s, &f, &e));
    assert_eq!(comm, h.mul(&hbar2(&s), u, u32::MAX));
    let qb = s.qbracket(&TruncatedSeries::exact(h.clone()), &TruncatedSeries::exact(e.clone())).unwrap();
    assert_eq!(qb.poly, e.scale(&q(2)));
}

#[test]
fn odd_qbracket_matches_anticommutator() {
    let ctx = WContext::new(&catalog_algebra("osp12").unwrap(), false).unwrap();
    let s = &ctx.star;
    let u = s.universe();
    let odd: Vec<usize> = (0..u.len()).filter(|&i| u.is_odd(i)).collect();
    let (x, y) = (SuperPoly::var(u.len(), odd[0]), SuperPoly::var(u.len(), odd[1]));
    let anti = star(s, &x, &y).add(&star(s, &y, &x));
    let qb = s.qbracket(&TruncatedSeries::exact(x), &TruncatedSeries::exact(y)).unwrap();
    assert_eq!(qb.poly.mul(&hbar2(s), u, u32::MAX), anti);
}

#[test]
fn rees_round_trip_on_mixed_components() {
    let s = sl2();
    let u = s.universe();
    let (e, h) = (var(&s, "e"), var(&s, "h"));
    let comps = vec![(e.clone(), 0u16), (h.mul(&e, u, u32::MAX), 1), (SuperPoly::one(u.len()), 3)];
    let image = rees_map(&comps, u).unwrap();
    let back = rees_inverse(&image, u).unwrap();
    let mut want = comps.clone();
    want.sort_by_key(|(f, j)| (f.weights(u)[0], *j));
    assert_eq!(back, want);
}

#[test]
fn homogenize_fills_hbar_powers() {
    let s = sl2();
    let u = s.universe();
    let e = var(&s, "e");
    let f = e.add(&SuperPoly::one(u.len()));
    let hom = homogenize(&f, 2, u).unwrap();
    assert_eq!(hom, e.add(&hbar2(&s)));
    assert!(homogenize(&f, 1, u).is_err());
}

#[test]
fn saturation_recovers_divided_generator() {
    let u = Universe::from_spec(&[("a", Parity::Even, 1), ("b", Parity::Even, 1)]).with_hbar();
    let n = u.len();
    let h = u.hbar().unwrap();
    let a = SuperPoly::var(n, 0);
    let b = SuperPoly::var(n, 1);
    let ha = SuperPoly::var(n, h).mul(&a, &u, u32::MAX);
    let sat = hbar_saturate(std::slice::from_ref(&ha), 3, &u).unwrap();
    assert!(ideal_contains(&sat, &a, &u));
    assert!(!ideal_contains(&sat, &b, &u));
    assert!(!ideal_contains(&[ha], &a, &u));
}

fn osp12_ctx() -> WContext {
    WContext::new(&catalog_algebra("osp12").unwrap(), false).unwrap()
}

/// Random hbar-free polynomial of the given parity on the star universe of `ctx`.
fn element(ctx: &WContext, seeds: &[(u8, u8, i8)], odd: bool) -> SuperPoly {
    let u = ctx.universe();
    let n = ctx.setup.len();
    let mut p = SuperPoly::zero();
    for &(a, b, c) in seeds {
        let mut e = vec![0u16; u.len()];
        for v in [a as usize % n, b as usize % (n + 1)] {
            if v < n {
                e[v] = if u.is_odd(v) { 1 } else { e[v] + 1 };
            }
        }
        let m = Monomial::from_exponents(&e);
        if m.parity(u).is_odd() == odd && c != 0 {
            p.add_term(m, q(c as i64));
        }
    }
    p
}

fn hbar_order_at_least(p: &SuperPoly, h: usize, k: u16) -> bool {
    p.terms().all(|(m, _)| m.exp(h) >= k)
}

fn seeds() -> impl Strategy<Value = Vec<(u8, u8, i8)>> {
    prop::collection::vec((any::<u8>(), any::<u8>(), -3i8..=3), 1..4)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn star_product_is_associative(a in seeds(), b in seeds(), c in seeds(), pa: bool, pb: bool, pc: bool) {
        let ctx = osp12_ctx();
        let s = &ctx.star;
        let (x, y, z) = (element(&ctx, &a, pa), element(&ctx, &b, pb), element(&ctx, &c, pc));
        let left = star(s, &star(s, &x, &y), &z);
        let right = star(s, &x, &star(s, &y, &z));
        prop_assert_eq!(left, right);
    }

    #[test]
    fn star_deforms_the_poisson_bracket(a in seeds(), b in seeds(), pa: bool, pb: bool) {
        let ctx = osp12_ctx();
        let s = &ctx.star;
        let u = s.universe();
        let h = s.hbar();
        let p = ctx.setup.poisson().unwrap();
        let (x, y) = (element(&ctx, &a, pa), element(&ctx, &b, pb));
        let xy = star(s, &x, &y);
        prop_assert!(hbar_order_at_least(&xy.sub(&x.mul(&y, u, u32::MAX)), h, 2));
        let drop = |f: &SuperPoly| f.map_monomials(|m| Some((q(1), Monomial::from_exponents(&m.exponents()[..h]))));
        let lift = |f: &SuperPoly| f.map_monomials(|m| {
            let mut e = m.exponents().to_vec();
            e.push(0);
            Some((q(1), Monomial::from_exponents(&e)))
        });
        let classical = lift(&p.bracket_poly(&drop(&x), &drop(&y), u32::MAX));
        let sign = if pa && pb && !x.is_zero() && !y.is_zero() { q(-1) } else { q(1) };
        let comm = xy.sub(&star(s, &y, &x).scale(&sign));
        let rest = comm.sub(&classical.mul(&hbar2(s), u, u32::MAX));
        prop_assert!(hbar_order_at_least(&rest, h, 3));
    }

    #[test]
    fn rees_round_trip(a in seeds(), j in 0u16..3) {
        let ctx = osp12_ctx();
        let u = ctx.universe();
        let x = element(&ctx, &a, false);
        // Keep one weight so the component is homogeneous and in the image.
        let Some(&w) = x.weights(u).iter().find(|&&w| w >= 0) else { return Ok(()) };
        let f = x.filter(|m| m.weight(u) == w);
        let image = rees_map(&[(f.clone(), j)], u).unwrap();
        prop_assert_eq!(rees_inverse(&image, u).unwrap(), vec![(f, j)]);
    }
}
