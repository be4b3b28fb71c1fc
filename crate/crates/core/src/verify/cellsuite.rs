//! The lowest two-sided cell: its description by frames, its left cells,
//! and the factorizations of Kazhdan–Lusztig basis elements along them.

use std::time::Instant;

use rayon::prelude::*;

use super::context::Context;
use super::report::{Check, SuiteReport};
use crate::error::{Error, Result};
use crate::hecke::HeckeElement;
use crate::laurent::Degree;
use crate::word::ElemId;

/// Radii used by [`check_cell_structure`].
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct CellRadii {
    /// `C_x C_y` is expanded for `x, y` up to this length; KL columns are
    /// checked up to the same length.
    pub table: usize,
    /// Elements up to this length must satisfy `w ∈ Λ` iff some pair in
    /// the table attains degree `N` at `w`.
    pub witness: usize,
}

impl CellRadii {
    /// Table one step beyond the atlas radius, witnesses two steps inside it.
    pub fn for_radius(r: usize) -> Self {
        CellRadii {
            table: r + 1,
            witness: r.saturating_sub(2),
        }
    }
}

pub fn check_cell_structure(ctx: &Context, radii: CellRadii) -> Result<SuiteReport> {
    let start = Instant::now();
    let r = ctx.radius;
    let ball = ctx.ball();
    let atlas = &ctx.atlas;
    let n = ctx.n() as i64;
    let show = |w: ElemId| ball.display(w);
    let table = ctx.kl.product_table(radii.table)?;
    let mut items = Vec::new();

    let mut top = Check::new("h-degree-bound");
    let d = table.max_degree();
    top.expect(d <= Degree::Finite(n), || {
        format!("some h_{{x,y,z}} has degree {d:?} > {n}")
    });
    items.push(top.with_note(format!("largest degree in the table: {d:?}")).finish());

    let mut witness = Check::new("lambda-witness").with_note(format!(
        "pairs of length at most {}; both directions up to length {}",
        radii.table, radii.witness
    ));
    let bounds: Vec<_> = ball
        .up_to(r)
        .collect::<Vec<_>>()
        .par_iter()
        .map(|&w| (w, table.a_lower_bound(w)))
        .collect();
    for (w, bound) in bounds {
        let attained = bound.degree == Degree::Finite(n);
        let in_lambda = atlas.in_lambda(w);
        if attained {
            witness.expect(in_lambda, || {
                let (x, y) = bound.witness.expect("attained");
                format!("deg h_{{{},{},{}}} = N but {} ∉ Λ", show(x), show(y), show(w), show(w))
            });
        } else if ball.length(w) <= radii.witness || !in_lambda {
            witness.expect(!in_lambda, || format!("{} ∈ Λ but no pair attains N", show(w)));
        } else {
            witness.skip();
        }
    }
    items.push(witness.finish());

    let lambda: Vec<ElemId> = ball.up_to(r).filter(|w| atlas.in_lambda(*w)).collect();
    let mut ids = Check::new("left-cell-ids");
    let mut inverse = Check::new("lambda-inverse-closed");
    let mut factor = Check::new("three-part-factorization");
    for &w in &lambda {
        let id = atlas.left_cell_id(w)?;
        let f = atlas.frame(id.frame);
        let u = ball.mul(w, ball.inverse(id.y))?;
        let ok = ball.length(u) + ball.length(id.y) == ball.length(w)
            && ball.is_suffix(f.longest, u)
            && atlas.in_b(id.frame, ball.mul(u, f.longest)?)
            && atlas.in_u(id.frame, id.y)?;
        ids.expect(ok, || {
            format!("{} is not in B_J·w_J·y for its id {}", show(w), atlas.cell_name(id))
        });
        inverse.expect(atlas.in_lambda(ball.inverse(w)), || format!("{}^-1 ∉ Λ", show(w)));
        match atlas.factorize(w) {
            Ok(_) => factor.pass(),
            Err(Error::Invariant(msg)) => factor.fail(|| msg),
            Err(e) => return Err(e),
        }
    }
    items.push(ids.finish());
    items.push(inverse.finish());
    items.push(factor.finish());

    let census = atlas.census();
    let mut count = Check::new("left-cell-count").with_note(format!(
        "expected {}, counts {:?} at radii {:?}",
        census.expected, census.counts, census.radii
    ));
    count.expect(census.consistent(), || {
        format!(
            "expected {} but counts {:?} at radii {:?}",
            census.expected, census.counts, census.radii
        )
    });
    items.push(count.finish());

    let kl_ids: Vec<ElemId> = ball.up_to(radii.table).collect();
    let mut columns = Check::new("kl-columns");
    let mut oracle = Check::new("kl-bar-fixing-agreement");
    let results: Vec<(ElemId, Result<()>, Result<bool>)> = kl_ids
        .par_iter()
        .map(|&w| {
            let shape = ctx.kl.verify_column(w);
            let agree = ctx.kl.c(w).and_then(|c| ctx.kl.bar_fixing_column(w).map(|b| &b == c));
            (w, shape, agree)
        })
        .collect();
    for (w, shape, agree) in results {
        match shape {
            Ok(()) => columns.pass(),
            Err(Error::Invariant(msg)) => columns.fail(|| msg),
            Err(e) => return Err(e),
        }
        match agree {
            Ok(ok) => oracle.expect(ok, || format!("C_{} differs from the bar-fixing solution", show(w))),
            Err(Error::Invariant(msg)) => oracle.fail(|| msg),
            Err(e) => return Err(e),
        }
    }
    items.push(columns.finish());
    items.push(oracle.finish());

    let mut frame = Check::new("kl-frame-factorization");
    for (fi, f) in atlas.frames().iter().enumerate() {
        let lj = ball.length(f.longest);
        if lj > radii.table {
            continue;
        }
        let room = radii.table - lj;
        let xs: Vec<ElemId> = ball.up_to(room).filter(|&x| atlas.in_b(fi, x)).collect();
        let mut ys = Vec::new();
        for y in ball.up_to(room) {
            if atlas.in_u(fi, y)? {
                ys.push(y);
            }
        }
        let cj = ctx.kl.c(f.longest)?;
        for &x in &xs {
            let xw = ball.reduced_mul(x, f.longest)?.expect("x ∈ B_J");
            let e = ctx.kl.e_element(x, f.longest)?;
            let left = ctx.algebra().mul(&e, cj)?;
            for &y in &ys {
                if ball.length(x) + ball.length(y) > room {
                    continue;
                }
                let w = ball.reduced_mul(xw, y)?.expect("y ∈ U_J");
                let prod = ctx.algebra().mul(&left, &ctx.kl.f_element(f.longest, y)?)?;
                frame.expect(&prod == ctx.kl.c(w)?, || {
                    format!("E_{}·C_{}·F_{} != C_{}", show(x), show(f.longest), show(y), show(w))
                });
            }
        }
    }
    items.push(frame.finish());

    let mut lowest = Check::new("kl-lowest-cell-factorization");
    for &w in lambda.iter().filter(|w| ball.length(**w) <= radii.table) {
        let fz = atlas.factorize(w)?;
        let wl = atlas.frame(fz.left_frame).longest;
        let wr = atlas.frame(fz.right_frame).longest;
        let e = ctx.kl.e_element(fz.x, wl)?;
        let f = ctx.kl.f_element(wr, fz.y)?;
        let prod: HeckeElement = ctx.algebra().mul(&ctx.algebra().mul(&e, ctx.kl.c(fz.p)?)?, &f)?;
        lowest.expect(&prod == ctx.kl.c(w)?, || {
            format!("E_{}·C_{}·F_{} != C_{}", show(fz.x), show(fz.p), show(fz.y), show(w))
        });
    }
    items.push(lowest.finish());

    Ok(SuiteReport {
        suite: "cells".into(),
        config: *ctx.config(),
        radius: r,
        seed: ctx.seed,
        items,
        elapsed_ms: start.elapsed().as_millis() as u64,
    })
}
