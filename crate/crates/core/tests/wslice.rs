use superw::rational::{format_rational, parse_rational, q, qf};
use superw::report::{truncate_presentation, walgebra_report, Method};
use superw::supercore::SuperPoly;
use superw::wslice::*;

#[test]
fn bundled_documents_validate_and_round_trip() {
    for name in bundled_names() {
        let g = catalog_algebra(name).unwrap();
        assert_eq!(load_algebra(&g.to_json()).unwrap(), g, "{name}");
        let grading = dynkin_grading(&g).unwrap();
        if let Some([e, _, _]) = &g.triple {
            check_goodness(&g, &grading, e).unwrap();
        }
    }
}

#[test]
fn rationals_print_in_lowest_terms() {
    assert_eq!(format_rational(&parse_rational("4/6").unwrap()), "2/3");
    assert_eq!(format_rational(&parse_rational("-10/5").unwrap()), "-2");
    assert!(parse_rational("1/0").is_err());
}

#[test]
fn sl2_generator_is_the_reduced_casimir() {
    let ctx = WContext::new(&catalog_algebra("sl2").unwrap(), false).unwrap();
    let w = whittaker_walgebra(&ctx, 4).unwrap();
    assert_eq!(w.generators.len(), 1);
    let u = ctx.universe();
    let n = u.len();
    let var = |s: &str| SuperPoly::var(n, u.find(s).unwrap());
    let h = var("h");
    let want = var("e").sub(&h.scale(&qf(1, 2))).add(&h.mul(&h, u, u32::MAX).scale(&qf(1, 4)));
    assert_eq!(w.generators[0].lift, want);
    assert!(ctx.is_invariant(&want));
    assert!(!ctx.is_invariant(&var("e")));
}

#[test]
fn gl11_without_nilpotent_gives_the_enveloping_algebra() {
    let ctx = WContext::new(&catalog_algebra("gl11").unwrap(), false).unwrap();
    assert!(ctx.setup.m_indices().is_empty());
    let w = whittaker_walgebra(&ctx, 4).unwrap();
    assert_eq!(w.filtered_dims, vec![1, 1, 5, 5, 13]);
}

#[test]
fn sl21_lagrangians_differ_but_tables_agree() {
    let g = catalog_algebra("sl21").unwrap();
    let a = WContext::new(&g, false).unwrap();
    let b = WContext::new(&g, true).unwrap();
    assert_ne!(a.setup.chi_form.lagrangian, b.setup.chi_form.lagrangian);
    assert_eq!(whittaker_walgebra(&a, 4).unwrap().filtered_dims, whittaker_walgebra(&b, 4).unwrap().filtered_dims);
}

#[test]
fn osp12_has_theta() {
    let ctx = WContext::new(&catalog_algebra("osp12").unwrap(), false).unwrap();
    assert!(ctx.setup.theta.is_some());
    assert_eq!(ctx.setup.theta_scale().map(|s| &s * &s * &ctx.setup.chi_form.theta.as_ref().unwrap().1), Some(q(1)));
}

#[test]
fn truncated_presentation_keeps_low_generators() {
    let ctx = WContext::new(&catalog_algebra("osp12").unwrap(), false).unwrap();
    let w = whittaker_walgebra(&ctx, 6).unwrap();
    let t = truncate_presentation(&w, 3);
    assert_eq!(t.weight_signature(), (vec![], vec![3, 1]));
    assert_eq!(t.filtered_dims, w.filtered_dims[..4].to_vec());
}

#[test]
fn walgebra_report_is_deterministic() {
    let g = catalog_algebra("osp12").unwrap();
    let a = walgebra_report(&g, 4, 4, 4, Method::Both, 3).unwrap();
    let b = walgebra_report(&g, 4, 4, 4, Method::Both, 3).unwrap();
    assert!(a.pass);
    assert_eq!(a.to_json(), b.to_json());
}
