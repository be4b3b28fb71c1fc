//! One weighted group followed through every layer of the public API:
//! (m_sr, m_st, m_rt) = (∞, 2, 2) with L(r) = L(t) = 1 and L(s) = 2.

use std::sync::Arc;

use coxcell::cells::delta_invariants;
use coxcell::word::parse_word;
use coxcell::{
    classify, CellAtlas, CoxeterSystem, ElemId, ExpectedCount, GlueReading, GroupBall, GroupConfig, GroupType,
    HeckeElement, JRing, KlTable, LaurentPoly,
};

struct Setup {
    system: CoxeterSystem,
    atlas: CellAtlas,
    kl: KlTable,
}

fn setup(radius: usize) -> Setup {
    let config = GroupConfig::from_orders(0, 2, 2, [1, 2, 1]).unwrap();
    let system = CoxeterSystem::new(config);
    let ball = Arc::new(GroupBall::enumerate(&system, radius).unwrap());
    let report = classify(&system).unwrap();
    let atlas = CellAtlas::new(ball.clone(), &report).unwrap();
    let kl = KlTable::new(ball);
    Setup { system, atlas, kl }
}

fn id(s: &Setup, w: &str) -> ElemId {
    s.atlas.ball().locate(&parse_word(w).unwrap()).unwrap()
}

fn v(e: i64) -> LaurentPoly {
    LaurentPoly::v_pow(e)
}

#[test]
fn classification() {
    let s = setup(2);
    let report = classify(&s.system).unwrap();
    assert_eq!(report.group_type, GroupType::Other);
    assert_eq!(report.n, 3);
    let m: Vec<String> = report.m.iter().map(|p| p.longest.word_string()).collect();
    assert_eq!(m, ["st"]);
    let sets: Vec<String> = report.finite_parabolics.iter().map(|p| p.set.to_string()).collect();
    assert_eq!(sets.len(), 6);
    assert!(!sets.contains(&"rs".to_string()));
}

#[test]
fn words_and_products() {
    let s = setup(4);
    let sys = &s.system;
    assert_eq!(sys.parse("tsrst").unwrap().word_string(), "srs");
    let x = sys.parse("st").unwrap();
    let y = sys.parse("rs").unwrap();
    let xy = sys.multiply(&x, &y).unwrap();
    assert_eq!(xy.length(), 4);
    let w = sys.parse("srst").unwrap();
    assert_eq!(w.left_descents().to_string(), "st");
    assert_eq!(w.right_descents().to_string(), "st");
    assert_eq!(xy, w);
}

#[test]
fn standard_basis() {
    let s = setup(6);
    let alg = s.kl.algebra();
    let rst = id(&s, "rst");
    let r = id(&s, "r");
    assert_eq!(alg.t_product(rst, r).unwrap(), HeckeElement::basis(id(&s, "rstr")));
    let st = id(&s, "st");
    let top = alg.f_poly(st, st, st).unwrap();
    assert_eq!(top.degree_and_coeff(3), (coxcell::Degree::Finite(3), 1.into()));
    assert_eq!(alg.beta(st, st, st, 3).unwrap(), 1.into());
    assert_eq!(alg.beta(st, st, ElemId::IDENTITY, 3).unwrap(), 0.into());
}

#[test]
fn kl_basis() {
    let s = setup(6);
    let st = id(&s, "st");
    let rst = id(&s, "rst");
    let r = id(&s, "r");
    assert_eq!(s.kl.p(ElemId::IDENTITY, st).unwrap(), v(-3));
    assert_eq!(s.kl.p(st, rst).unwrap(), v(-1));
    let e_r = s.kl.e_element(r, st).unwrap();
    assert_eq!(
        e_r,
        HeckeElement::from_pairs([(ElemId::IDENTITY, v(-1)), (r, LaurentPoly::one())])
    );
    let c = s.kl.c(id(&s, "rstr")).unwrap().clone();
    let f_r = s.kl.f_element(st, r).unwrap();
    let alg = s.kl.algebra();
    let prod = alg.mul(&alg.mul(&e_r, s.kl.c(st).unwrap()).unwrap(), &f_r).unwrap();
    assert_eq!(prod, c);
    assert_eq!(alg.bar(&c), c);
}

#[test]
fn lowest_cell() {
    let s = setup(8);
    let a = &s.atlas;
    assert!(a.in_lambda(id(&s, "st")));
    assert!(!a.in_lambda(id(&s, "srs")));
    assert!(!a.in_lambda(ElemId::IDENTITY));
    assert_eq!(a.cell_name(a.left_cell_id(id(&s, "rst")).unwrap()), "st:e");
    assert_eq!(a.cell_name(a.left_cell_id(id(&s, "str")).unwrap()), "st:r");
    let fz = a.factorize(id(&s, "rstr")).unwrap();
    assert_eq!((fz.x, fz.p, fz.y), (id(&s, "r"), id(&s, "st"), id(&s, "r")));
    let fz = a.factorize(id(&s, "srst")).unwrap();
    assert_eq!((fz.x, fz.p, fz.y), (ElemId::IDENTITY, id(&s, "srst"), ElemId::IDENTITY));

    let census = a.census();
    assert_eq!(census.expected, ExpectedCount::Finite(2));
    assert_eq!(census.cells, ["st:e", "st:r"]);
    assert!(census.consistent());

    let cells = a.left_cells();
    let d: Vec<ElemId> = cells.iter().map(|&c| a.distinguished(c, &s.kl).unwrap()).collect();
    assert_eq!(d, [id(&s, "st"), id(&s, "rstr")]);
    assert_eq!(delta_invariants(&s.kl, id(&s, "st")).unwrap().0, 3);
    for &c in &cells {
        for &other in &cells {
            if c != other {
                let m = a.members(other);
                assert!(a.members(c).iter().all(|w| !m.contains(w)));
            }
        }
    }
}

#[test]
fn based_ring() {
    let s = setup(8);
    let j = JRing::new(&s.atlas, s.kl.algebra());
    let srst = id(&s, "srst");
    let sq = j.product(srst, srst).unwrap();
    let pairs: Vec<(String, i64)> = sq
        .to_pairs(s.atlas.ball())
        .into_iter()
        .map(|(w, c)| (w, c.to_i64().unwrap()))
        .collect();
    assert_eq!(pairs, [("st".to_string(), 1), ("srsrst".to_string(), 1)]);
    let closed = j.closed_form(srst, srst).unwrap();
    assert!(closed.delta());
    assert_eq!(closed.to_element(), sq);

    let ind = j.indecomposables(GlueReading::Amalgam).unwrap();
    assert_eq!(ind, [srst]);
    assert!(j.reading_disagreements().unwrap().is_empty());
    assert!(!j.is_indecomposable(id(&s, "srsrst")).unwrap());
    assert!(!j.is_indecomposable(id(&s, "st")).unwrap());
}
