use bcdaha::exact::{RatFunc, Rational};
use bcdaha::presentations::{
    relation_set, shift_to_drinfeld, verify, Fault, Params, Perturbed, Presentation, ScaledY,
    ShiftedRep, Status,
};
use bcdaha::rootsys_dunkl::{
    monomial_domain, polynomial_representation, sample_params, window_domain, x_depth,
    DunklParams, LaurentRep,
};

fn symbolic() -> DunklParams<RatFunc> {
    DunklParams {
        t: RatFunc::symbol("t"),
        k1: RatFunc::symbol("k1"),
        k2: RatFunc::symbol("k2"),
        k3: RatFunc::symbol("k3"),
    }
}

#[test]
fn lusztig_ddaha_rank_two_symbolic() {
    let p = symbolic();
    let rep = LaurentRep::new(2, p.clone()).unwrap();
    let rels = relation_set(Presentation::Lusztig, 2, &p.to_presentation_params());
    let report = verify(&rep, &rels, &monomial_domain(2, 2)).unwrap();
    for r in &report.results {
        assert_eq!(r.status, Status::Ok, "{r:?}");
    }
}

#[test]
fn drinfeld_ddaha_rank_two_symbolic_through_shift() {
    let p = symbolic();
    let params = p.to_presentation_params();
    let rep = LaurentRep::new(2, p).unwrap();
    let shifted = ShiftedRep::new(&rep, shift_to_drinfeld(2, &params));
    let rels = relation_set(Presentation::Drinfeld, 2, &params);
    let report = verify(&shifted, &rels, &monomial_domain(2, 2)).unwrap();
    assert!(report.all_ok(), "{:?}", report.failures().collect::<Vec<_>>());
}

#[test]
fn daha_subalgebra_rank_two() {
    let p = symbolic();
    let daha = Params::Daha {
        kappa1: p.k1.clone(),
        kappa2: p.k2.clone().add(&p.k3),
    };
    let rep = LaurentRep::new(2, p).unwrap();
    let lus = relation_set(Presentation::Lusztig, 2, &daha);
    assert!(verify(&rep, &lus, &monomial_domain(2, 2)).unwrap().all_ok());
    let shifted = ShiftedRep::new(&rep, shift_to_drinfeld(2, &daha));
    let dri = relation_set(Presentation::Drinfeld, 2, &daha);
    assert!(verify(&shifted, &dri, &monomial_domain(2, 2)).unwrap().all_ok());
}

#[test]
fn rank_three_at_sample_points() {
    for p in sample_params(7, 5) {
        let params = p.to_presentation_params();
        let rep = LaurentRep::new(3, p).unwrap();
        let domain = monomial_domain::<Rational>(3, 1);
        let lus = relation_set(Presentation::Lusztig, 3, &params);
        assert!(verify(&rep, &lus, &domain).unwrap().all_ok());
        let shifted = ShiftedRep::new(&rep, shift_to_drinfeld(3, &params));
        let dri = relation_set(Presentation::Drinfeld, 3, &params);
        let r = verify(&shifted, &dri, &domain).unwrap();
        assert!(r.all_ok(), "{:?}", r.failures().collect::<Vec<_>>());
    }
}

#[test]
fn window_operators_agree_on_certified_vectors() {
    let p = symbolic();
    let params = p.to_presentation_params();
    let rels = relation_set(Presentation::Lusztig, 2, &params);
    let depth = x_depth(&rels);
    assert_eq!(depth, 2);
    let rep = polynomial_representation(2, &p, 3).unwrap();
    let report = verify(&rep, &rels, &window_domain(2, 3, 3 - depth)).unwrap();
    assert!(report.all_ok());
    let wide = verify(&rep, &rels, &window_domain(2, 3, 3)).unwrap();
    assert!(!wide.any_fail());
    assert!(wide.count(Status::Partial) > 0);
}

#[test]
fn fault_breaks_both_presentations() {
    let p = symbolic();
    let params = p.to_presentation_params();
    let rep = LaurentRep::new(2, p).unwrap();
    let fault: Fault = "y1+1".parse().unwrap();
    let bad = Perturbed::new(&rep, &fault);
    let domain = monomial_domain(2, 1);
    let lus = verify(&bad, &relation_set(Presentation::Lusztig, 2, &params), &domain).unwrap();
    let failing = lus.get("dDAHA-L.iii.Sy.i=1").unwrap();
    assert_eq!(failing.status, Status::Fail);
    assert!(failing.witness.is_some());
    let shifted = ShiftedRep::new(&bad, shift_to_drinfeld(2, &params));
    let dri = verify(&shifted, &relation_set(Presentation::Drinfeld, 2, &params), &domain).unwrap();
    assert!(dri.any_fail());
}

#[test]
fn scaling_y_rescales_kappa() {
    let p = symbolic();
    let rep = LaurentRep::new(2, p.clone()).unwrap();
    for a in [2i64, 3] {
        let af = RatFunc::integer(a);
        let scaled = ScaledY::new(&rep, af.clone());
        let daha = Params::Daha {
            kappa1: p.k1.mul(&af),
            kappa2: p.k2.add(&p.k3).mul(&af),
        };
        let r = verify(&scaled, &relation_set(Presentation::Lusztig, 2, &daha), &monomial_domain(2, 1))
            .unwrap();
        assert!(r.all_ok());
    }
}
