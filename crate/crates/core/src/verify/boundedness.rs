//! Degree bounds for products in the standard basis.

use std::time::Instant;

use rayon::prelude::*;

use super::context::Context;
use super::report::{Check, SuiteReport};
use crate::error::Result;
use crate::hecke::HeckeElement;
use crate::laurent::Degree;
use crate::word::{parse_word, ElemId, GenSet, GroupBall, GroupConfig, Order};

/// `T_x T_y` for every `x, y` of length at most `radius`, indexed by id.
pub fn t_table(ctx: &Context, radius: usize) -> Result<Vec<Vec<HeckeElement>>> {
    let ids: Vec<ElemId> = ctx.ball().up_to(radius).collect();
    ids.par_iter().map(|&x| ctx.algebra().t_row(x, radius)).collect()
}

/// The three infinite non-affine shapes with `m_rt = 2` and `m_sr ≥ m_st`
/// for which the coset degree tables are stated.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum TableShape {
    /// `m_sr = ∞ > m_st ≥ 3`.
    InfiniteBond,
    /// `∞ > m_sr ≥ m_st ≥ 4`, `m_sr ≥ 5`.
    LargeBonds,
    /// `∞ > m_sr ≥ 7`, `m_st = 3`.
    LongBond,
}

pub fn table_shape(config: &GroupConfig) -> Option<TableShape> {
    if config.m_rt() != Order::Finite(2) {
        return None;
    }
    match (config.m_sr(), config.m_st()) {
        (Order::Infinite, Order::Finite(b)) if b >= 3 => Some(TableShape::InfiniteBond),
        (Order::Finite(a), Order::Finite(b)) if a >= b && b >= 4 && a >= 5 => Some(TableShape::LargeBonds),
        (Order::Finite(a), Order::Finite(3)) if a >= 7 => Some(TableShape::LongBond),
        _ => None,
    }
}

enum QSpec {
    Word(&'static str),
    AtLeast(usize),
}

enum BoundSpec {
    /// Maximum of the weights of the listed words.
    Max(&'static [&'static str]),
    Zero,
}

struct Row {
    j: &'static str,
    q: QSpec,
    bound: BoundSpec,
}

const fn row(j: &'static str, q: QSpec, bound: BoundSpec) -> Row {
    Row { j, q, bound }
}

use BoundSpec::{Max, Zero};
use QSpec::{AtLeast, Word};

const INFINITE_BOND: &[Row] = &[row("st", AtLeast(2), Zero)];

const LARGE_BONDS: &[Row] = &[
    row("rs", Word("sr"), Max(&["st", "sr"])),
    row("rs", Word("rs"), Max(&["st", "sr"])),
    row("rs", Word("rsr"), Max(&["s"])),
    row("rs", Word("srs"), Max(&["t", "r"])),
    row("rs", AtLeast(4), Zero),
    row("st", Word("st"), Max(&["sr"])),
    row("st", Word("ts"), Max(&["sr"])),
    row("st", Word("tst"), Zero),
    row("st", Word("sts"), Max(&["r"])),
    row("st", AtLeast(4), Zero),
];

const LONG_BOND: &[Row] = &[
    row("rs", Word("sr"), Max(&["srsr"])),
    row("rs", Word("rs"), Max(&["srsr"])),
    row("rs", Word("srs"), Max(&["srs"])),
    row("rs", Word("rsr"), Max(&["srs"])),
    row("rs", Word("srsr"), Max(&["sr"])),
    row("rs", Word("rsrs"), Max(&["sr"])),
    row("rs", Word("rsrsr"), Max(&["s"])),
    row("rs", Word("srsrs"), Zero),
    row("rs", AtLeast(6), Zero),
];

fn word_weight(config: &GroupConfig, w: &str) -> i64 {
    parse_word(w)
        .expect("static word")
        .iter()
        .map(|&g| config.weight(g) as i64)
        .sum()
}

fn parabolic_members(ball: &GroupBall, j: GenSet) -> Vec<ElemId> {
    ball.ids()
        .filter(|&w| ball.word(w).iter().all(|g| j.contains(*g)))
        .collect()
}

fn deg(h: &HeckeElement) -> Degree {
    h.degree()
}

pub fn check_boundedness(ctx: &Context) -> Result<SuiteReport> {
    let start = Instant::now();
    let r = ctx.radius;
    let ball = ctx.ball();
    let n = ctx.n() as i64;
    let table = t_table(ctx, r)?;
    let ids: Vec<ElemId> = ball.up_to(r).collect();
    let f = |x: ElemId, y: ElemId| &table[x.index()][y.index()];
    let show = |w: ElemId| ball.display(w);
    let mut items = Vec::new();

    let mut bound = Check::new("degree-bound");
    let mut identity = Check::new("identity-coefficient");
    let mut min_weight = Check::new("degree-min-weight");
    let mut top = Degree::NegInf;
    for &x in &ids {
        for &y in &ids {
            let p = f(x, y);
            let d = deg(p);
            top = top.max(d);
            bound.expect(d <= Degree::Finite(n), || {
                format!("deg T_{}·T_{} = {:?} > {n}", show(x), show(y), d)
            });
            let expected = if ball.inverse(x) == y { 1 } else { 0 };
            let e = p.coeff(ElemId::IDENTITY);
            identity.expect((expected == 1 && e.is_one()) || (expected == 0 && e.is_zero()), || {
                format!("f({},{},e) = {e}", show(x), show(y))
            });
            for (z, c) in p.terms() {
                let cap = ball.weight(x).min(ball.weight(y)).min(ball.weight(z)) as i64;
                min_weight.expect(c.degree() <= Degree::Finite(cap), || {
                    format!("deg f({},{},{}) = {:?} > {cap}", show(x), show(y), show(z), c.degree())
                });
            }
        }
    }
    items.push(bound.with_note(format!("largest degree seen: {top:?}")).finish());
    items.push(identity.finish());
    items.push(min_weight.finish());

    let cyclic = ids
        .par_iter()
        .map(|&x| {
            let mut c = Check::new("cyclic-symmetry");
            let xi = ball.inverse(x);
            for &y in &ids {
                for &z in &ids {
                    let a = f(x, y).coeff(ball.inverse(z));
                    let b = f(y, z).coeff(xi);
                    c.expect(a == b, || {
                        format!(
                            "f({},{},{}^-1) = {a} but f({},{},{}^-1) = {b}",
                            show(x),
                            show(y),
                            show(z),
                            show(y),
                            show(z),
                            show(x)
                        )
                    });
                }
            }
            c
        })
        .reduce(
            || Check::new("cyclic-symmetry"),
            |mut a, b| {
                a.merge(b);
                a
            },
        );
    items.push(cyclic.finish());

    let mut parabolic = Check::new("parabolic-top-degree");
    for p in &ctx.report.finite_parabolics {
        if p.set.is_empty() {
            continue;
        }
        let Some(wi) = ball.lookup(p.longest.word()).filter(|w| ball.length(*w) <= r) else {
            parabolic.skip();
            continue;
        };
        let prod = f(wi, wi);
        for x in parabolic_members(ball, p.set) {
            if ball.length(x) > ball.length(wi) {
                continue;
            }
            let c = prod.coeff(x);
            parabolic.expect(
                c.degree() == Degree::Finite(ball.weight(x) as i64) && c.leading_coeff().is_one(),
                || format!("f({w},{w},{}) = {c}", show(x), w = show(wi)),
            );
        }
    }
    items.push(parabolic.finish());

    let mut reduced = Check::new("longest-coset-products");
    let mut strict = Check::new("coset-degree-strict");
    for (fi, frame) in ctx.atlas.frames().iter().enumerate() {
        let wj = frame.longest;
        let lj = ball.length(wj);
        let qs: Vec<ElemId> = parabolic_members(ball, frame.j)
            .into_iter()
            .filter(|q| ball.length(*q) <= lj)
            .collect();
        let right: Vec<ElemId> = ids
            .iter()
            .copied()
            .filter(|&y| !ball.left_descents(y).intersects(frame.j))
            .collect();
        let in_u: Vec<ElemId> = right
            .iter()
            .copied()
            .filter(|&y| ctx.atlas.in_u(fi, y).unwrap_or(false))
            .collect();
        for &x in &ids {
            if ball.right_descents(x).intersects(frame.j) {
                continue;
            }
            for &q in &qs {
                if ball.length(x) + ball.length(q) > r {
                    continue;
                }
                let xq = ball
                    .reduced_mul(x, q)?
                    .expect("coset representative times parabolic element");
                let lq = ball.weight(q) as i64;
                for &y in &right {
                    let p = f(xq, y);
                    reduced.expect(deg(p) <= Degree::Finite(n - lq), || {
                        format!(
                            "deg T_{}·T_{} = {:?} > N - L({}) = {}",
                            show(xq),
                            show(y),
                            deg(p),
                            show(q),
                            n - lq
                        )
                    });
                    if q == wj {
                        let full = ball.mul(xq, y)?;
                        reduced.expect(*p == HeckeElement::basis(full), || {
                            format!("T_{}·T_{} != T_{}", show(xq), show(y), show(full))
                        });
                    }
                }
                if q == wj {
                    continue;
                }
                for &y in &in_u {
                    let p = f(xq, y);
                    strict.expect(deg(p) < Degree::Finite(n - lq), || {
                        format!(
                            "deg T_{}·T_{} = {:?} not < N - L({}) = {}",
                            show(xq),
                            show(y),
                            deg(p),
                            show(q),
                            n - lq
                        )
                    });
                }
            }
        }
    }
    items.push(reduced.finish());
    items.push(strict.finish());

    if let Some(shape) = table_shape(ctx.config()) {
        items.push(check_table(ctx, shape, &table, &ids)?.finish());
    }

    Ok(SuiteReport {
        suite: "boundedness".into(),
        config: *ctx.config(),
        radius: r,
        seed: ctx.seed,
        items,
        elapsed_ms: start.elapsed().as_millis() as u64,
    })
}

fn check_table(ctx: &Context, shape: TableShape, table: &[Vec<HeckeElement>], ids: &[ElemId]) -> Result<Check> {
    let ball = ctx.ball();
    let cfg = ctx.config();
    let n = ctx.n() as i64;
    let rows = match shape {
        TableShape::InfiniteBond => INFINITE_BOND,
        TableShape::LargeBonds => LARGE_BONDS,
        TableShape::LongBond => LONG_BOND,
    };
    let mut check = Check::new("coset-degree-table");
    for row in rows {
        let j = GenSet::parse(row.j).expect("static set");
        if ctx.atlas.frame_index(j).is_none() {
            continue;
        }
        let wj = ctx
            .report
            .parabolic(j)
            .expect("frame is a finite parabolic")
            .longest
            .clone();
        let lj = wj.length();
        let qs: Vec<ElemId> = match row.q {
            Word(w) => vec![ball.locate(&parse_word(w).expect("static word"))?],
            AtLeast(k) => parabolic_members(ball, j)
                .into_iter()
                .filter(|q| ball.length(*q) >= k && ball.length(*q) < lj)
                .collect(),
        };
        let cap = match row.bound {
            Max(words) => words.iter().map(|w| word_weight(cfg, w)).max().unwrap_or(0),
            Zero => 0,
        };
        for q in qs {
            let lq = ball.weight(q) as i64;
            for &x in ids {
                if ball.right_descents(x).intersects(j) {
                    continue;
                }
                if ball.length(x) + ball.length(q) > ctx.radius {
                    continue;
                }
                let xq = ball
                    .reduced_mul(x, q)?
                    .expect("coset representative times parabolic element");
                for &y in ids {
                    if ball.left_descents(y).intersects(j) {
                        continue;
                    }
                    let d = table[xq.index()][y.index()].degree();
                    check.expect(d <= Degree::Finite(cap) && d < Degree::Finite(n - lq), || {
                        format!(
                            "w_{} q={}: deg T_{}·T_{} = {:?}, row bound {cap}, N - L(q) = {}",
                            row.j,
                            ball.display(q),
                            ball.display(xq),
                            ball.display(y),
                            d,
                            n - lq
                        )
                    });
                }
            }
        }
    }
    Ok(check)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::verify::report::Status;

    fn run(m: (u32, u32, u32), w: [u32; 3], r: usize) -> SuiteReport {
        let cfg = GroupConfig::from_orders(m.0, m.1, m.2, w).unwrap();
        let ctx = Context::new(cfg, r, 2 * r, 1).unwrap();
        check_boundedness(&ctx).unwrap()
    }

    #[test]
    fn shapes() {
        let s = |m: (u32, u32, u32)| table_shape(&GroupConfig::from_orders(m.0, m.1, m.2, [1, 1, 1]).unwrap());
        assert_eq!(s((0, 3, 2)), Some(TableShape::InfiniteBond));
        assert_eq!(s((5, 4, 2)), Some(TableShape::LargeBonds));
        assert_eq!(s((7, 3, 2)), Some(TableShape::LongBond));
        assert_eq!(s((0, 2, 2)), None);
        assert_eq!(s((3, 3, 3)), None);
    }

    #[test]
    fn small_sweeps_pass() {
        for (m, w, r) in [
            ((0, 3, 2), [1, 1, 1], 4),
            ((5, 4, 2), [1, 1, 1], 4),
            ((0, 2, 2), [1, 2, 1], 4),
        ] {
            let rep = run(m, w, r);
            assert!(rep.passed(), "{}", rep.render_table());
            assert!(
                rep.items.iter().all(|i| i.status == Status::Pass),
                "{}",
                rep.render_table()
            );
        }
    }
}
