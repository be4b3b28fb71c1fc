//! Restricted checks of the cell-theoretic properties on the lowest cell.
//!
//! The `a`-value of every element of the lowest cell is `N`; nothing here
//! relies on `a`-values off that cell. Preorder relations are generated by
//! multiplication with `C_s` inside the ball, so the preorder checks are an
//! under-approximation.

use std::collections::{BTreeMap, HashMap};
use std::time::Instant;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use super::boundedness::t_table;
use super::context::Context;
use super::report::{Check, CheckItem, SuiteReport};
use crate::cells::delta_invariants;
use crate::error::{Error, Result};
use crate::hecke::HeckeElement;
use crate::int::Int;
use crate::kl::ProductTable;
use crate::laurent::{Degree, LaurentPoly};
use crate::word::{ElemId, Gen, GenSet};

/// Number of sampled instances for the sampled checks.
pub const SAMPLES: usize = 256;

const EDGE_NOTE: &str = "preorder restricted to single C_s multiplications inside the ball";

struct Data<'a> {
    ctx: &'a Context,
    n: i64,
    t: Vec<Vec<HeckeElement>>,
    h: ProductTable,
    delta: HashMap<ElemId, (i64, Int)>,
}

impl<'a> Data<'a> {
    fn c0(&self, w: ElemId) -> bool {
        self.ctx.atlas.in_lambda(w)
    }

    fn show(&self, w: ElemId) -> String {
        self.ctx.ball().display(w)
    }

    fn inv(&self, w: ElemId) -> ElemId {
        self.ctx.ball().inverse(w)
    }

    fn delta(&self, z: ElemId) -> &(i64, Int) {
        &self.delta[&z]
    }

    fn distinguished(&self, d: ElemId) -> bool {
        self.delta(d).0 == self.n
    }

    /// `π_N(f_{x,y,z^-1})`.
    fn beta(&self, x: ElemId, y: ElemId, z: ElemId) -> Int {
        self.t[x.index()][y.index()].coeff(self.inv(z)).coeff(self.n)
    }

    fn hpoly(&self, x: ElemId, y: ElemId, z: ElemId) -> LaurentPoly {
        self.h.h(x, y, z).expect("pair inside the product table")
    }

    fn left_edges(&self, z: ElemId) -> Result<Vec<ElemId>> {
        let ball = self.ctx.ball();
        let mut out = Vec::new();
        for g in Gen::ALL {
            let e = self.ctx.kl.h_expansion(ball.generator(g)?, z)?;
            out.extend(e.support());
        }
        out.sort();
        out.dedup();
        Ok(out)
    }

    fn right_edges(&self, z: ElemId) -> Result<Vec<ElemId>> {
        let ball = self.ctx.ball();
        let mut out = Vec::new();
        for g in Gen::ALL {
            let e = self.ctx.kl.h_expansion(z, ball.generator(g)?)?;
            out.extend(e.support());
        }
        out.sort();
        out.dedup();
        Ok(out)
    }
}

type Tensor = BTreeMap<(i64, i64), Int>;

fn tensor_add(acc: &mut Tensor, a: &LaurentPoly, b: &LaurentPoly) {
    for (i, ai) in a.terms() {
        for (j, bj) in b.terms() {
            let e = acc.entry((*i, *j)).or_insert(Int::ZERO);
            *e = &*e + &(ai * bj);
            if e.is_zero() {
                acc.remove(&(*i, *j));
            }
        }
    }
}

pub fn check_p_suite(ctx: &Context) -> Result<SuiteReport> {
    let start = Instant::now();
    let r = ctx.radius;
    let ball = ctx.ball();
    if ball.radius() < 2 * r {
        return Err(Error::OutOfBall {
            needed: 2 * r,
            radius: ball.radius(),
        });
    }
    let t = t_table(ctx, r)?;
    let h = ctx.kl.product_table(r)?;
    let mut delta = HashMap::new();
    for z in ball.ids() {
        delta.insert(z, delta_invariants(&ctx.kl, z)?);
    }
    let d = Data {
        ctx,
        n: ctx.n() as i64,
        t,
        h,
        delta,
    };
    let ids: Vec<ElemId> = ball.up_to(r).collect();
    let c0: Vec<ElemId> = ids.iter().copied().filter(|&w| d.c0(w)).collect();
    let c0_outer: Vec<ElemId> = ball.ids().filter(|&w| d.c0(w)).collect();
    let mut items = Vec::new();

    items.push(gamma_beta(&d.t, &d.h, ctx, &c0).finish());

    let mut p1 = Check::new("a-at-most-delta");
    for &z in &c0_outer {
        let dz = d.delta(z).0;
        p1.expect(d.n <= dz, || format!("Δ({}) = {dz} < N", d.show(z)));
    }
    items.push(p1.finish());

    let mut p2 = Check::new("distinguished-forces-inverse");
    let mut p5 = Check::new("distinguished-coefficient-one");
    for &x in &c0 {
        for &y in &c0 {
            for (zi, c) in d.t[x.index()][y.index()].terms() {
                let b = c.coeff(d.n);
                if b.is_zero() {
                    continue;
                }
                let dd = d.inv(zi);
                if !d.c0(dd) || !d.distinguished(dd) {
                    continue;
                }
                p2.expect(x == d.inv(y), || {
                    format!("γ({},{},{}) = {b} with x != y^-1", d.show(x), d.show(y), d.show(dd))
                });
                if x == d.inv(y) {
                    let nd = &d.delta(dd).1;
                    p5.expect(b.is_one() && nd.is_one(), || {
                        format!("γ({},{},{}) = {b}, n = {nd}", d.show(x), d.show(y), d.show(dd))
                    });
                }
            }
        }
    }
    items.push(p2.finish());

    let mut p3 = Check::new("unique-distinguished-partner");
    for &y in &c0 {
        let yi = d.inv(y);
        let partners: Vec<ElemId> = d.t[yi.index()][y.index()]
            .terms()
            .filter(|(_, c)| !c.coeff(d.n).is_zero())
            .map(|(z, _)| d.inv(z))
            .filter(|&dd| d.c0(dd) && d.distinguished(dd))
            .collect();
        p3.expect(partners.len() == 1, || {
            format!(
                "{} has distinguished partners [{}]",
                d.show(y),
                partners.iter().map(|&p| d.show(p)).collect::<Vec<_>>().join(", ")
            )
        });
    }
    items.push(p3.finish());
    items.push(p5.finish());

    let mut p6 = Check::new("distinguished-involution");
    for &z in &c0_outer {
        if d.distinguished(z) {
            p6.expect(d.inv(z) == z, || format!("{} squared is not e", d.show(z)));
        }
    }
    items.push(p6.finish());

    // Edges leaving lowest-cell elements of the ball.
    let mut p4 = Check::new("lowest-cell-closed-downward").with_note(EDGE_NOTE);
    let mut p9 = Check::new("left-edges-stay-in-left-cell").with_note(EDGE_NOTE);
    let mut p10 = Check::new("right-edges-stay-in-right-cell").with_note(EDGE_NOTE);
    let mut p11 = Check::new("two-sided-edges-stay-in-cell").with_note(EDGE_NOTE);
    let atlas = &ctx.atlas;
    for &z in &c0 {
        let lz = atlas.left_cell_id(z)?;
        let rz = atlas.right_cell_id(z)?;
        for zp in d.left_edges(z)? {
            let inside = d.c0(zp);
            p4.expect(inside, || {
                format!("{} below {} on the left but outside", d.show(zp), d.show(z))
            });
            p11.expect(inside, || format!("{} ~ {} fails", d.show(zp), d.show(z)));
            if inside {
                p9.expect(atlas.left_cell_id(zp)? == lz, || {
                    format!("{} and {} in different left cells", d.show(zp), d.show(z))
                });
            }
        }
        for zp in d.right_edges(z)? {
            let inside = d.c0(zp);
            p4.expect(inside, || {
                format!("{} below {} on the right but outside", d.show(zp), d.show(z))
            });
            p11.expect(inside, || format!("{} ~ {} fails", d.show(zp), d.show(z)));
            if inside {
                p10.expect(atlas.right_cell_id(zp)? == rz, || {
                    format!("{} and {} in different right cells", d.show(zp), d.show(z))
                });
            }
        }
    }
    items.push(p4.finish());

    // γ symmetry and left-cell co-membership from the C-basis table.
    let mut p7 = Check::new("gamma-cyclic");
    let mut p8 = Check::new("gamma-left-cells");
    for &x in &ids {
        for &y in &ids {
            for &z in &ids {
                let (xc, zc) = (d.c0(x), d.c0(z));
                if !xc && !zc {
                    continue;
                }
                let lhs = d.hpoly(x, y, d.inv(z));
                let rhs = d.hpoly(y, z, d.inv(x));
                let ok = match (xc, zc) {
                    (true, true) => lhs.coeff(d.n) == rhs.coeff(d.n),
                    (true, false) => lhs.is_zero() && rhs.coeff(d.n).is_zero(),
                    (false, true) => lhs.coeff(d.n).is_zero() && rhs.is_zero(),
                    (false, false) => unreachable!(),
                };
                p7.expect(ok, || {
                    format!(
                        "h({},{},{}^-1) = {lhs}, h({},{},{}^-1) = {rhs}",
                        d.show(x),
                        d.show(y),
                        d.show(z),
                        d.show(y),
                        d.show(z),
                        d.show(x)
                    )
                });
            }
            for (w, c) in d.h.get(x, y).expect("in table").terms() {
                let z = d.inv(w);
                if !d.c0(z) || c.coeff(d.n).is_zero() {
                    continue;
                }
                let ok = d.c0(x)
                    && d.c0(y)
                    && d.c0(w)
                    && atlas.left_cell_id(x)? == atlas.left_cell_id(d.inv(y))?
                    && atlas.left_cell_id(y)? == atlas.left_cell_id(w)?
                    && atlas.left_cell_id(z)? == atlas.left_cell_id(d.inv(x))?;
                p8.expect(ok, || {
                    format!("γ({},{},{}) != 0 across left cells", d.show(x), d.show(y), d.show(z))
                });
            }
        }
    }
    items.push(p7.finish());
    items.push(p8.finish());
    items.push(p9.finish());
    items.push(p10.finish());
    items.push(p11.finish());

    let mut p12 = Check::new("parabolic-a-value");
    for pair in [GenSet::parse("rs"), GenSet::parse("rt"), GenSet::parse("st")] {
        let pair = pair.expect("static set");
        let members: Vec<ElemId> = ids
            .iter()
            .copied()
            .filter(|&w| ball.word(w).iter().all(|g| pair.contains(*g)))
            .collect();
        let exhausted = ctx.report.parabolic(pair).is_some_and(|p| p.longest.length() <= r);
        for &y in members.iter().filter(|&&y| d.c0(y)) {
            let mut best = Degree::NegInf;
            for &a in &members {
                for &b in &members {
                    best = best.max(d.hpoly(a, b, y).degree());
                }
            }
            if best == Degree::Finite(d.n) {
                p12.pass();
            } else if best > Degree::Finite(d.n) || exhausted {
                p12.fail(|| format!("a({}) inside W_{pair} is {best:?}", d.show(y)));
            } else {
                p12.skip();
            }
        }
    }
    items.push(p12.finish());

    let mut p13 = Check::new("one-distinguished-per-left-cell");
    let cells: Vec<_> = {
        let mut v: Vec<_> = c0.iter().map(|&w| atlas.left_cell_id(w)).collect::<Result<_>>()?;
        v.sort();
        v.dedup();
        v
    };
    for cell in cells {
        match atlas.distinguished(cell, &ctx.kl) {
            Ok(dd) => {
                p13.pass();
                for x in atlas.members(cell).into_iter().filter(|x| ball.length(*x) <= r) {
                    let g = d.beta(d.inv(x), x, dd);
                    p13.expect(!g.is_zero(), || {
                        format!(
                            "γ({}^-1,{},{}) = 0 in cell {}",
                            d.show(x),
                            d.show(x),
                            d.show(dd),
                            atlas.cell_name(cell)
                        )
                    });
                }
            }
            Err(Error::OutOfBall { .. }) => p13.skip(),
            Err(e @ Error::Invariant(_)) => p13.fail(|| e.to_string()),
            Err(e) => return Err(e),
        }
    }
    items.push(p13.finish());

    let mut p14 = Check::new("inverse-in-cell");
    for &z in &c0_outer {
        p14.expect(d.c0(d.inv(z)), || format!("{}^-1 outside", d.show(z)));
    }
    items.push(p14.finish());

    let mut rng = ChaCha8Rng::seed_from_u64(ctx.seed);
    items.push(check_tensor(&d, &ids, &c0, &mut rng).finish());
    items.push(check_witness(&d, &ids, &c0, &mut rng)?.finish());

    Ok(SuiteReport {
        suite: "p".into(),
        config: *ctx.config(),
        radius: r,
        seed: ctx.seed,
        items,
        elapsed_ms: start.elapsed().as_millis() as u64,
    })
}

/// `π_N(f_{x,y,z^-1}) = π_N(h_{x,y,z^-1})` for all `x, y, z` in `c0`.
fn gamma_beta(t: &[Vec<HeckeElement>], h: &ProductTable, ctx: &Context, c0: &[ElemId]) -> Check {
    let ball = ctx.ball();
    let n = ctx.n() as i64;
    let rows: Vec<Check> = c0
        .par_iter()
        .map(|&x| {
            let mut c = Check::new("gamma-equals-beta");
            for &y in c0 {
                let tf = &t[x.index()][y.index()];
                let hc = h.get(x, y).expect("pair inside the product table");
                for &z in c0 {
                    let zi = ball.inverse(z);
                    let b = tf.coeff(zi).coeff(n);
                    let g = hc.coeff(zi).coeff(n);
                    c.expect(b == g, || {
                        format!(
                            "β({},{},{}) = {b} but γ = {g}",
                            ball.display(x),
                            ball.display(y),
                            ball.display(z)
                        )
                    });
                }
            }
            c
        })
        .collect();
    let mut out = Check::new("gamma-equals-beta");
    for c in rows {
        out.merge(c);
    }
    out
}

/// The cross-check of top coefficients of `T`-basis and `C`-basis products
/// on lowest-cell triples of length at most `ctx.radius`.
pub fn check_gamma_beta(ctx: &Context) -> Result<CheckItem> {
    let r = ctx.radius;
    let t = t_table(ctx, r)?;
    let h = ctx.kl.product_table(r)?;
    let c0: Vec<ElemId> = ctx.ball().up_to(r).filter(|w| ctx.atlas.in_lambda(*w)).collect();
    Ok(gamma_beta(&t, &h, ctx, &c0).finish())
}

/// `Σ_{y'} h_{x,y',y} ⊗ h_{w,x',y'} = Σ_{y'} h_{x,w,y'} ⊗ h_{y',x',y}`, `y'`
/// over the lowest cell, on quadruples whose sums stay inside the table.
fn check_tensor(d: &Data, ids: &[ElemId], c0: &[ElemId], rng: &mut ChaCha8Rng) -> Check {
    let ball = d.ctx.ball();
    let r = d.ctx.radius;
    let mut check = Check::new("tensor-associativity");
    let ws: Vec<ElemId> = c0.iter().copied().filter(|&w| ball.length(w) < r).collect();
    if ws.is_empty() || c0.is_empty() {
        return check;
    }
    for _ in 0..SAMPLES {
        let w = *ws.choose(rng).expect("nonempty");
        let room = r - ball.length(w);
        let short: Vec<ElemId> = ids.iter().copied().filter(|&u| ball.length(u) <= room).collect();
        let x = *short.choose(rng).expect("identity fits");
        let xp = *short.choose(rng).expect("identity fits");
        let y = *c0.choose(rng).expect("nonempty");
        let mut lhs = Tensor::new();
        for (yp, b) in d.h.get(w, xp).expect("in table").terms() {
            if d.c0(yp) {
                tensor_add(&mut lhs, &d.hpoly(x, yp, y), b);
            }
        }
        let mut rhs = Tensor::new();
        for (yp, a) in d.h.get(x, w).expect("in table").terms() {
            if d.c0(yp) {
                tensor_add(&mut rhs, a, &d.hpoly(yp, xp, y));
            }
        }
        check.expect(lhs == rhs, || {
            format!("x={} x'={} y={} w={}", d.show(x), d.show(xp), d.show(y), d.show(w))
        });
    }
    check
}

/// For `γ_{x,y,z^-1} != 0` and `z'` one left step below `z`, look for
/// `x'` in the lowest cell with `π_N(h_{x',y,z'}) != 0`.
fn check_witness(d: &Data, ids: &[ElemId], c0: &[ElemId], rng: &mut ChaCha8Rng) -> Result<Check> {
    let ball = d.ctx.ball();
    let r = d.ctx.radius;
    let mut check = Check::new("left-step-witness");
    let mut triples = Vec::new();
    for &x in ids {
        for &y in ids {
            for (z, c) in d.h.get(x, y).expect("in table").terms() {
                if ball.length(z) < r && d.c0(z) && !c.coeff(d.n).is_zero() {
                    triples.push((x, y, z));
                }
            }
        }
    }
    if triples.is_empty() {
        return Ok(check);
    }
    for _ in 0..SAMPLES {
        let (_, y, z) = triples[rng.gen_range(0..triples.len())];
        let edges = d.left_edges(z)?;
        let zp = *edges.choose(rng).expect("z is below itself");
        let found = c0.iter().any(|&xp| !d.hpoly(xp, y, zp).coeff(d.n).is_zero());
        if found {
            check.pass();
        } else {
            check.skip();
        }
    }
    Ok(check)
}
