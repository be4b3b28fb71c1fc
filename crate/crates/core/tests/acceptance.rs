//! Acceptance run: one line per criterion. Exits nonzero if any criterion
//! deviates from its recorded outcome.

use std::process::ExitCode;
use std::sync::Arc;
use std::time::Instant;

use coxcell::verify::{
    check_boundedness, check_cell_structure, check_gamma_beta, check_jring, check_p_suite, printed_indecomposables,
    CellRadii, Context, Status, SuiteReport, DEFAULT_SEED,
};
use coxcell::{classify, CellAtlas, CoxeterSystem, ExpectedCount, GroupBall, GroupConfig, JRing};

/// Radius for the boundedness and degree checks.
const BOUND_RADIUS: usize = 5;
/// Atlas radius, product-table radius and witness radius for the lowest-cell check.
const CELL_RADIUS: usize = 5;
const TABLE_RADIUS: usize = 6;
const WITNESS_RADIUS: usize = 3;
/// Radius at which left cells are counted (three radii ending here).
const CENSUS_RADIUS: usize = 12;
/// Radius at which indecomposable sets are compared; lengths above
/// `TABLE_CHECK_RADIUS - 2` must be empty.
const TABLE_CHECK_RADIUS: usize = 8;
const CLOSED_FORM_RADIUS: usize = 6;
const P_RADII: [usize; 2] = [4, 5];
/// Largest allowed share of inconclusive items (and instances) at radius 5.
const INCONCLUSIVE_LIMIT: f64 = 0.20;
const GAMMA_RADIUS: usize = 4;

/// Criteria whose failure is recorded with an analysis, with the one
/// failing row each is expected to show.
const KNOWN_RED: &[(usize, &str)] = &[(5, "L(rt)>L(s)")];

type Orders = (u32, u32, u32);

const CONFIGS: &[(Orders, [u32; 3])] = &[
    ((0, 3, 2), [1, 1, 1]),
    ((0, 3, 2), [2, 1, 1]),
    ((0, 4, 2), [1, 1, 1]),
    ((0, 4, 2), [1, 2, 1]),
    ((5, 4, 2), [1, 1, 1]),
    ((5, 4, 2), [1, 1, 2]),
    ((7, 3, 2), [1, 1, 1]),
    ((7, 3, 2), [2, 2, 2]),
    ((0, 2, 2), [1, 2, 1]),
    ((0, 2, 2), [1, 1, 1]),
    ((0, 2, 2), [2, 1, 1]),
    ((0, 0, 2), [1, 2, 1]),
    ((0, 0, 2), [1, 1, 1]),
    ((0, 0, 2), [1, 3, 1]),
    ((0, 0, 0), [1, 1, 1]),
    ((0, 0, 0), [2, 2, 1]),
    ((0, 0, 0), [3, 2, 1]),
];

fn config(m: Orders, w: [u32; 3]) -> GroupConfig {
    GroupConfig::from_orders(m.0, m.1, m.2, w).expect("valid config")
}

fn configs() -> Vec<GroupConfig> {
    CONFIGS.iter().map(|&(m, w)| config(m, w)).collect()
}

fn context(cfg: GroupConfig, r: usize, outer: usize) -> Context {
    Context::new(cfg, r, outer, DEFAULT_SEED).expect("context")
}

struct Outcome {
    pass: bool,
    detail: String,
    failing: Vec<String>,
}

impl Outcome {
    fn new(failing: Vec<String>, detail: String) -> Self {
        Outcome {
            pass: failing.is_empty(),
            detail,
            failing,
        }
    }
}

fn item_failures(reports: &[SuiteReport], names: &[&str]) -> Vec<String> {
    let mut out = Vec::new();
    for rep in reports {
        for name in names {
            match rep.item(name) {
                Some(i) if i.status == Status::Pass => {}
                Some(i) => out.push(format!("{} {name}: {} {:?}", rep.config, i.status, i.witnesses.first())),
                None => out.push(format!("{} {name}: missing", rep.config)),
            }
        }
    }
    out
}

fn checked(reports: &[SuiteReport], names: &[&str]) -> u64 {
    reports
        .iter()
        .flat_map(|r| names.iter().filter_map(|n| r.item(n)))
        .map(|i| i.checked)
        .sum()
}

fn boundedness_reports() -> Vec<SuiteReport> {
    configs()
        .into_iter()
        .map(|cfg| check_boundedness(&context(cfg, BOUND_RADIUS, 2 * BOUND_RADIUS)).expect("boundedness"))
        .collect()
}

fn criterion_1(reports: &[SuiteReport]) -> Outcome {
    let names = ["degree-bound"];
    Outcome::new(
        item_failures(reports, &names),
        format!(
            "{} configs, {} pairs at radius {BOUND_RADIUS}",
            reports.len(),
            checked(reports, &names)
        ),
    )
}

fn criterion_2(reports: &[SuiteReport]) -> Outcome {
    let names = [
        "identity-coefficient",
        "degree-min-weight",
        "cyclic-symmetry",
        "parabolic-top-degree",
    ];
    Outcome::new(
        item_failures(reports, &names),
        format!(
            "{} instances over {} configs at radius {BOUND_RADIUS}",
            checked(reports, &names),
            reports.len()
        ),
    )
}

fn cell_reports() -> Vec<SuiteReport> {
    let radii = CellRadii {
        table: TABLE_RADIUS,
        witness: WITNESS_RADIUS,
    };
    configs()
        .into_iter()
        .map(|cfg| check_cell_structure(&context(cfg, CELL_RADIUS, 2 * TABLE_RADIUS), radii).expect("cells"))
        .collect()
}

fn criterion_3(reports: &[SuiteReport]) -> Outcome {
    let names = ["lambda-witness", "h-degree-bound"];
    Outcome::new(
        item_failures(reports, &names),
        format!(
            "{} elements up to length {CELL_RADIUS}, pairs up to length {TABLE_RADIUS}, both directions up to length {WITNESS_RADIUS}",
            checked(reports, &["lambda-witness"])
        ),
    )
}

fn criterion_4() -> Outcome {
    // Exact counts required by the criterion; every other config must match
    // the case split (finite and stable, or strictly increasing).
    let exact: &[(Orders, [u32; 3], usize)] = &[
        ((0, 2, 2), [1, 2, 1], 2),
        ((0, 2, 2), [1, 1, 1], 2),
        ((0, 2, 2), [2, 1, 1], 2),
        ((3, 3, 3), [1, 1, 1], 6),
        ((0, 0, 2), [1, 2, 1], 4),
        ((0, 0, 0), [1, 1, 1], 3),
        ((0, 0, 0), [2, 2, 1], 4),
    ];
    let infinite: &[(Orders, [u32; 3])] = &[
        ((0, 3, 2), [1, 1, 1]),
        ((0, 4, 2), [1, 1, 1]),
        ((5, 4, 2), [1, 1, 1]),
        ((7, 3, 2), [1, 1, 1]),
    ];
    let mut all: Vec<(GroupConfig, Option<ExpectedCount>)> = Vec::new();
    for &(m, w, n) in exact {
        all.push((config(m, w), Some(ExpectedCount::Finite(n))));
    }
    for &(m, w) in infinite {
        all.push((config(m, w), Some(ExpectedCount::Infinite)));
    }
    for cfg in configs() {
        if !all.iter().any(|(c, _)| *c == cfg) {
            all.push((cfg, None));
        }
    }
    let mut failing = Vec::new();
    let mut shown = Vec::new();
    for (cfg, want) in &all {
        let sys = CoxeterSystem::new(*cfg);
        let report = classify(&sys).expect("classify");
        let ball = Arc::new(GroupBall::enumerate(&sys, CENSUS_RADIUS).expect("ball"));
        let census = CellAtlas::new(ball, &report).expect("atlas").census();
        let ok = census.consistent() && want.is_none_or(|w| w == census.expected);
        if !ok {
            failing.push(format!(
                "{cfg}: expected {:?}, predicted {}, counts {:?}",
                want, census.expected, census.counts
            ));
        }
        shown.push(format!("{:?}", census.counts));
    }
    Outcome::new(
        failing,
        format!(
            "{} configs at radii {}..={CENSUS_RADIUS}: {}",
            all.len(),
            CENSUS_RADIUS - 2,
            shown.join(" ")
        ),
    )
}

fn criterion_5() -> Outcome {
    let mut failing = Vec::new();
    let mut rows = Vec::new();
    for cfg in configs().into_iter().filter(|c| printed_indecomposables(c).is_some()) {
        let rep = check_jring(&context(cfg, TABLE_CHECK_RADIUS, 2 * TABLE_CHECK_RADIUS)).expect("jring");
        let item = rep.item("indecomposable-table").expect("table item");
        let (row, _) = printed_indecomposables(&cfg).expect("row");
        rows.push(format!("{row}:{}", item.status));
        if item.status != Status::Pass {
            failing.push(format!("{row}: {}", item.witnesses.join("; ")));
        }
    }
    Outcome::new(failing, format!("radius {TABLE_CHECK_RADIUS}: {}", rows.join(" ")))
}

fn criterion_6() -> Outcome {
    let mut failing = Vec::new();
    let mut pairs = 0;
    for cfg in configs() {
        let rep = check_jring(&context(cfg, CLOSED_FORM_RADIUS, 2 * CLOSED_FORM_RADIUS)).expect("jring");
        failing.extend(item_failures(
            std::slice::from_ref(&rep),
            &["closed-form-matches-product"],
        ));
        pairs += checked(std::slice::from_ref(&rep), &["closed-form-matches-product"]);
    }
    // The worked instance.
    let cfg = config((0, 2, 2), [1, 2, 1]);
    let ctx = context(cfg, 4, 8);
    let ring = JRing::new(&ctx.atlas, ctx.algebra());
    let x = ctx
        .ball()
        .locate(&coxcell::word::parse_word("srst").expect("word"))
        .expect("in ball");
    let prod = ring.product(x, x).expect("product");
    let closed = ring.closed_form(x, x).expect("closed form").to_element();
    let pairs_text = prod.to_pairs(ctx.ball());
    let want = vec![("st".to_string(), 1.into()), ("srsrst".to_string(), 1.into())];
    if pairs_text != want || closed != prod {
        failing.push(format!("t_srst² = {}", prod.render(ctx.ball())));
    }
    Outcome::new(
        failing,
        format!(
            "{pairs} pairs at radius ≤ {CLOSED_FORM_RADIUS}; t_srst·t_srst = {}",
            prod.render(ctx.ball())
        ),
    )
}

fn criterion_7(reports: &[SuiteReport]) -> Outcome {
    let names = [
        "kl-columns",
        "kl-bar-fixing-agreement",
        "kl-frame-factorization",
        "kl-lowest-cell-factorization",
    ];
    Outcome::new(
        item_failures(reports, &names),
        format!(
            "{} columns up to length {TABLE_RADIUS}, {} frame factorizations, {} lowest-cell factorizations",
            checked(reports, &["kl-columns"]),
            checked(reports, &["kl-frame-factorization"]),
            checked(reports, &["kl-lowest-cell-factorization"])
        ),
    )
}

fn criterion_8() -> Outcome {
    let cases: &[(&str, Orders, [u32; 3])] = &[
        ("infinite bond", (0, 3, 2), [1, 1, 1]),
        ("large bonds", (5, 4, 2), [1, 1, 1]),
        ("long bond", (7, 3, 2), [1, 1, 1]),
        ("easy", (0, 2, 2), [1, 2, 1]),
    ];
    let mut failing = Vec::new();
    let mut shown = Vec::new();
    for &(label, m, w) in cases {
        for r in P_RADII {
            let rep = check_p_suite(&context(config(m, w), r, 2 * r)).expect("p suite");
            failing.extend(
                rep.failures()
                    .map(|i| format!("{label} r={r} {}: {:?}", i.name, i.witnesses.first())),
            );
            let (frac, items) = (rep.inconclusive_fraction(), rep.inconclusive_item_fraction());
            if r == 5 && (frac >= INCONCLUSIVE_LIMIT || items >= INCONCLUSIVE_LIMIT) {
                failing.push(format!(
                    "{label} r={r}: inconclusive {frac:.3} of instances, {items:.3} of items"
                ));
            }
            if r == 5 {
                let n: u64 = rep.items.iter().map(|i| i.checked).sum();
                shown.push(format!("{label} {n} checked, {:.1}% inconclusive", 100.0 * frac));
            }
        }
    }
    Outcome::new(failing, format!("radii {P_RADII:?}; at radius 5: {}", shown.join(", ")))
}

fn criterion_9() -> Outcome {
    let mut failing = Vec::new();
    let mut n = 0;
    for cfg in configs() {
        let item = check_gamma_beta(&context(cfg, GAMMA_RADIUS, 2 * GAMMA_RADIUS)).expect("gamma");
        n += item.checked;
        if item.status != Status::Pass {
            failing.push(format!("{cfg}: {:?}", item.witnesses.first()));
        }
    }
    Outcome::new(failing, format!("{n} lowest-cell triples at radius {GAMMA_RADIUS}"))
}

fn main() -> ExitCode {
    let start = Instant::now();
    let bounded = boundedness_reports();
    let cells = cell_reports();
    let outcomes: Vec<(usize, &str, Outcome)> = vec![
        (1, "boundedness", criterion_1(&bounded)),
        (2, "standard-basis degree lemma", criterion_2(&bounded)),
        (3, "lowest cell identification", criterion_3(&cells)),
        (4, "left cell counts", criterion_4()),
        (5, "indecomposable tables", criterion_5()),
        (6, "closed-form products", criterion_6()),
        (7, "KL self-consistency", criterion_7(&cells)),
        (8, "restricted cell properties", criterion_8()),
        (9, "top coefficients agree", criterion_9()),
    ];
    let mut unexpected = Vec::new();
    for (k, name, o) in &outcomes {
        println!(
            "criterion {k} {name}: {} ({})",
            if o.pass { "PASS" } else { "FAIL" },
            o.detail
        );
        for f in &o.failing {
            println!("    {f}");
        }
        let known: Vec<&str> = KNOWN_RED.iter().filter(|(c, _)| c == k).map(|(_, row)| *row).collect();
        let as_recorded = if known.is_empty() {
            o.pass
        } else {
            !o.pass && o.failing.len() == known.len() && o.failing.iter().zip(&known).all(|(f, row)| f.starts_with(row))
        };
        if !as_recorded {
            unexpected.push(*k);
        }
    }
    println!("acceptance finished in {:.1}s", start.elapsed().as_secs_f64());
    if unexpected.is_empty() {
        ExitCode::SUCCESS
    } else {
        println!("criteria deviating from their recorded outcome: {unexpected:?}");
        ExitCode::FAILURE
    }
}
