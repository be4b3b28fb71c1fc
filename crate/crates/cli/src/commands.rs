use std::fmt::Write as _;
use std::sync::Arc;

use serde_json::{json, Value};

use coxcell::verify::{Context, Suite};
use coxcell::word::{GroupType, Order};
use coxcell::{
    classify, Cache, CacheOutcome, CellAtlas, CoxeterSystem, Degree, ElemId, Element, Error, GlueReading, GroupBall,
    GroupConfig, HeckeElement, JRing, KlTable, LaurentPoly, Result,
};

use crate::args::{Cli, Command, GroupArgs, Reading};

/// What a subcommand produced, in both output formats.
pub struct Output {
    pub json: Value,
    pub table: String,
    /// A verification suite reported a failure.
    pub failed: bool,
}

impl Output {
    fn ok(json: Value, table: String) -> Self {
        Output {
            json,
            table,
            failed: false,
        }
    }
}

pub fn group_config(args: &GroupArgs) -> Result<GroupConfig> {
    if let Some(path) = &args.config {
        return GroupConfig::load(path);
    }
    let order = |flag: &str, v: &Option<String>| -> Result<Order> {
        let v = v
            .as_deref()
            .ok_or_else(|| Error::Config(format!("--{flag} is required unless --config is given")))?;
        Order::parse(v)
    };
    let (sr, st, rt) = (
        order("m-sr", &args.m_sr)?,
        order("m-st", &args.m_st)?,
        order("m-rt", &args.m_rt)?,
    );
    let weights = match &args.weights {
        None => [1, 1, 1],
        Some(w) => {
            let parts: Vec<&str> = w.split(',').map(str::trim).collect();
            let bad = || Error::Config(format!("bad weights '{w}': expected three positive integers r,s,t"));
            if parts.len() != 3 {
                return Err(bad());
            }
            let mut out = [0u32; 3];
            for (o, p) in out.iter_mut().zip(parts) {
                *o = p.parse().map_err(|_| bad())?;
            }
            out
        }
    };
    GroupConfig::new(sr, st, rt, weights)
}

struct Env<'a> {
    cli: &'a Cli,
    system: CoxeterSystem,
}

impl Env<'_> {
    fn config(&self) -> &GroupConfig {
        self.system.config()
    }

    fn element(&self, s: &str) -> Result<Element> {
        if s == "e" {
            Ok(self.system.identity())
        } else {
            self.system.parse(s)
        }
    }

    fn ball(&self, radius: usize) -> Result<Arc<GroupBall>> {
        Ok(Arc::new(GroupBall::enumerate(&self.system, radius)?))
    }

    /// A KL table on the ball of `radius`, from the cache when one is given.
    fn kl(&self, radius: usize, build_len: usize) -> Result<KlTable> {
        match &self.cli.cache {
            None => Ok(KlTable::new(self.ball(radius)?)),
            Some(dir) => {
                let (kl, outcome) = Cache::new(dir).load_or_build(self.config(), radius, build_len)?;
                if let CacheOutcome::Rebuilt(why) = outcome {
                    eprintln!("warning: cache unusable ({why}); recomputed");
                }
                Ok(kl)
            }
        }
    }

    /// `r`, enlarged so that the ball holds the longest elements in `M`.
    fn atlas_radius(&self, r: usize) -> Result<usize> {
        let rep = classify(&self.system)?;
        Ok(rep.m.iter().map(|p| p.longest.length()).fold(r, usize::max))
    }

    fn atlas(&self, ball: Arc<GroupBall>) -> Result<CellAtlas> {
        CellAtlas::new(ball, &classify(&self.system)?)
    }
}

fn id(ball: &GroupBall, x: &Element) -> Result<ElemId> {
    ball.id_of(x)
}

fn word(ball: &GroupBall, w: ElemId) -> String {
    ball.word_string(w)
}

fn degree(d: Degree) -> Value {
    match d {
        Degree::Finite(d) => json!(d),
        Degree::NegInf => Value::Null,
    }
}

fn poly_json(p: &LaurentPoly) -> Value {
    serde_json::to_value(p).expect("polynomials serialize")
}

fn hecke_json(h: &HeckeElement, ball: &GroupBall) -> Value {
    Value::Array(
        h.to_pairs(ball)
            .into_iter()
            .map(|(w, p)| json!([w, poly_json(&p)]))
            .collect(),
    )
}

pub fn run(cli: &Cli) -> Result<Output> {
    let config = group_config(&cli.group)?;
    let system = match cli.node_cap {
        Some(cap) => CoxeterSystem::with_node_cap(config, cap),
        None => CoxeterSystem::new(config),
    };
    let env = Env { cli, system };
    match &cli.command {
        Command::Ball => ball(&env),
        Command::Classify => classify_cmd(&env),
        Command::Mult { x, y } => mult(&env, x, y),
        Command::F { x, y, z } => f_poly(&env, x, y, z),
        Command::Kl { w } => kl(&env, w),
        Command::H { x, y, z } => h_poly(&env, x, y, z),
        Command::Afn { w } => afn(&env, w),
        Command::Lambda { w } => lambda(&env, w),
        Command::Cells => cells(&env),
        Command::Factorize { w } => factorize(&env, w),
        Command::J0 { x, y } => j0(&env, x, y),
        Command::Indecomposable { reading } => indecomposable(&env, *reading),
        Command::Verify { suite } => verify(&env, suite),
    }
}

fn ball(env: &Env) -> Result<Output> {
    let r = env.cli.radius.unwrap_or(4);
    let ball = env.ball(r)?;
    let levels = ball.level_sizes();
    let mut table = format!("{}\nradius {r}: {} elements\n", env.config(), ball.len());
    for (k, n) in levels.iter().enumerate() {
        let words: Vec<String> = ball.level_ids(k).map(|w| ball.display(w)).collect();
        writeln!(table, "  {k} ({n}): {}", words.join(" ")).unwrap();
    }
    let json = json!({
        "config": env.config(),
        "radius": r,
        "size": ball.len(),
        "levels": levels,
        "elements": ball.ids().map(|w| word(&ball, w)).collect::<Vec<_>>(),
    });
    Ok(Output::ok(json, table))
}

fn classify_cmd(env: &Env) -> Result<Output> {
    let rep = classify(&env.system)?;
    let m: Vec<String> = rep.m.iter().map(|p| p.longest.word_string()).collect();
    let kind = match rep.group_type {
        GroupType::Finite => "finite",
        GroupType::Affine => "affine",
        GroupType::Other => "other",
    };
    let mut table = format!(
        "{}\ntype: {kind}\nN = {}\nM = {{{}}}\n",
        env.config(),
        rep.n,
        m.join(", ")
    );
    if let Some(k) = rep.w0_order {
        writeln!(table, "|W0| = {k}").unwrap();
    }
    table.push_str("finite parabolics:\n");
    for p in &rep.finite_parabolics {
        let set = if p.set.is_empty() {
            "{}".to_string()
        } else {
            p.set.to_string()
        };
        let longest = if p.longest.is_identity() {
            "e".to_string()
        } else {
            p.longest.word_string()
        };
        writeln!(table, "  {set:<4} w = {longest:<8} L = {}", p.weight).unwrap();
    }
    let json = json!({
        "config": env.config(),
        "type": kind,
        "n": rep.n,
        "m": m,
        "w0_order": rep.w0_order,
        "parabolics": rep.finite_parabolics.iter().map(|p| json!({
            "set": p.set.to_string(),
            "longest": p.longest.word_string(),
            "weight": p.weight,
        })).collect::<Vec<_>>(),
    });
    Ok(Output::ok(json, table))
}

fn mult(env: &Env, x: &str, y: &str) -> Result<Output> {
    let (x, y) = (env.element(x)?, env.element(y)?);
    let ball = env.ball(x.length() + y.length())?;
    let alg = coxcell::HeckeAlgebra::new(ball.clone());
    let prod = alg.t_product(id(&ball, &x)?, id(&ball, &y)?)?;
    let table = format!("T_{} T_{} = {}\n", show(&x), show(&y), prod.render(&ball, "T"));
    Ok(Output::ok(hecke_json(&prod, &ball), table))
}

fn show(x: &Element) -> String {
    if x.is_identity() {
        "e".into()
    } else {
        x.word_string()
    }
}

fn f_poly(env: &Env, x: &str, y: &str, z: &str) -> Result<Output> {
    let (x, y, z) = (env.element(x)?, env.element(y)?, env.element(z)?);
    let ball = env.ball((x.length() + y.length()).max(z.length()))?;
    let alg = coxcell::HeckeAlgebra::new(ball.clone());
    let p = alg.f_poly(id(&ball, &x)?, id(&ball, &y)?, id(&ball, &z)?)?;
    let table = format!("f_{{{},{},{}}} = {p}\n", show(&x), show(&y), show(&z));
    Ok(Output::ok(
        json!({"f": poly_json(&p), "degree": degree(p.degree())}),
        table,
    ))
}

fn kl(env: &Env, w: &str) -> Result<Output> {
    let w = env.element(w)?;
    let r = env.cli.radius.unwrap_or(0).max(w.length());
    let kl = env.kl(r, w.length())?;
    let ball = kl.ball();
    let wid = id(ball, &w)?;
    let col = kl.c(wid)?;
    let mut table = String::new();
    for (x, p) in col.terms().rev() {
        writeln!(table, "p_{{{},{}}} = {p}", ball.display(x), show(&w)).unwrap();
    }
    Ok(Output::ok(hecke_json(col, ball), table))
}

fn h_poly(env: &Env, x: &str, y: &str, z: &str) -> Result<Output> {
    let (x, y, z) = (env.element(x)?, env.element(y)?, env.element(z)?);
    let r = (x.length() + y.length()).max(z.length());
    let kl = env.kl(r, r)?;
    let ball = kl.ball();
    let p = kl.h_poly(id(ball, &x)?, id(ball, &y)?, id(ball, &z)?)?;
    let table = format!("h_{{{},{},{}}} = {p}\n", show(&x), show(&y), show(&z));
    Ok(Output::ok(
        json!({"h": poly_json(&p), "degree": degree(p.degree())}),
        table,
    ))
}

fn afn(env: &Env, w: &str) -> Result<Output> {
    let w = env.element(w)?;
    let r = env.cli.radius.unwrap_or(3);
    let kl = env.kl((2 * r).max(w.length()), 2 * r)?;
    let ball = kl.ball();
    let wid = id(ball, &w)?;
    let n = classify(&env.system)?.n;
    let bound = kl.product_table(r)?.a_lower_bound(wid);
    let witness = bound.witness.map(|(x, y)| [word(ball, x), word(ball, y)]);
    let mut table = format!("a({}) >= {} from pairs of length <= {r}", show(&w), bound.degree);
    if let Some((x, y)) = bound.witness {
        write!(
            table,
            ", attained by h_{{{},{},{}}}",
            ball.display(x),
            ball.display(y),
            show(&w)
        )
        .unwrap();
    }
    writeln!(table, "\nN = {n}").unwrap();
    let json = json!({
        "w": w.word_string(),
        "radius": r,
        "bound": degree(bound.degree),
        "witness": witness,
        "n": n,
    });
    Ok(Output::ok(json, table))
}

fn lambda(env: &Env, w: &str) -> Result<Output> {
    let w = env.element(w)?;
    let ball = env.ball(env.atlas_radius(env.cli.radius.unwrap_or(0).max(w.length()))?)?;
    let atlas = env.atlas(ball.clone())?;
    let wid = id(&ball, &w)?;
    let inside = atlas.in_lambda(wid);
    let cell = if inside {
        Some(atlas.cell_name(atlas.left_cell_id(wid)?))
    } else {
        None
    };
    let table = match &cell {
        Some(c) => format!("{} is in the lowest cell, left cell {c}\n", show(&w)),
        None => format!("{} is not in the lowest cell\n", show(&w)),
    };
    Ok(Output::ok(
        json!({"w": w.word_string(), "in_lambda": inside, "left_cell": cell}),
        table,
    ))
}

fn cells(env: &Env) -> Result<Output> {
    let r = env.atlas_radius(env.cli.radius.unwrap_or(6))?;
    let kl = env.kl(r, r)?;
    let atlas = env.atlas(kl.algebra().ball_arc().clone())?;
    let export = atlas.export(Some(&kl))?;
    let c = &export.census;
    let mut table = format!(
        "{}\nradius {r}: |Λ| = {}, N = {}, M = {{{}}}\nleft cells: {} (expected {}; counts {:?} at radii {:?})\n",
        env.config(),
        export.lambda_size,
        export.n,
        export.m.join(", "),
        export.cells.len(),
        c.expected,
        c.counts,
        c.radii
    );
    for (name, cell) in &export.cells {
        let d = cell
            .distinguished
            .as_deref()
            .map(|d| if d.is_empty() { "e" } else { d });
        writeln!(
            table,
            "  {name:<8} {:>6} members  d = {}",
            cell.members.len(),
            d.unwrap_or("?")
        )
        .unwrap();
    }
    Ok(Output::ok(serde_json::to_value(&export)?, table))
}

fn factorize(env: &Env, w: &str) -> Result<Output> {
    let w = env.element(w)?;
    let ball = env.ball(env.atlas_radius(env.cli.radius.unwrap_or(0).max(w.length()))?)?;
    let atlas = env.atlas(ball.clone())?;
    let fz = atlas.factorize(id(&ball, &w)?)?;
    let (jl, jr) = (
        atlas.frame(fz.left_frame).j.to_string(),
        atlas.frame(fz.right_frame).j.to_string(),
    );
    let table = format!(
        "{} = {} · {} · {}   (p in P_{{{jl},{jr}}})\n",
        show(&w),
        ball.display(fz.x),
        ball.display(fz.p),
        ball.display(fz.y)
    );
    let json = json!({
        "w": w.word_string(),
        "x": word(&ball, fz.x),
        "p": word(&ball, fz.p),
        "y": word(&ball, fz.y),
        "left_frame": jl,
        "right_frame": jr,
    });
    Ok(Output::ok(json, table))
}

fn j0(env: &Env, x: &str, y: &str) -> Result<Output> {
    let (x, y) = (env.element(x)?, env.element(y)?);
    let ball = env.ball(env.atlas_radius(x.length() + y.length())?)?;
    let atlas = env.atlas(ball.clone())?;
    let alg = coxcell::HeckeAlgebra::new(ball.clone());
    let ring = JRing::new(&atlas, &alg);
    let prod = ring.product(id(&ball, &x)?, id(&ball, &y)?)?;
    let table = format!("t_{} t_{} = {}\n", show(&x), show(&y), prod.render(&ball));
    Ok(Output::ok(serde_json::to_value(prod.to_pairs(&ball))?, table))
}

fn indecomposable(env: &Env, reading: Reading) -> Result<Output> {
    let r = env.atlas_radius(env.cli.radius.unwrap_or(8))?;
    let ball = env.ball(r)?;
    let atlas = env.atlas(ball.clone())?;
    let alg = coxcell::HeckeAlgebra::new(ball.clone());
    let ring = JRing::new(&atlas, &alg);
    let (name, glue) = match reading {
        Reading::Amalgam => ("amalgam", GlueReading::Amalgam),
        Reading::Literal => ("literal", GlueReading::Literal),
    };
    let found: Vec<String> = ring
        .indecomposables(glue)?
        .into_iter()
        .map(|w| word(&ball, w))
        .collect();
    let disagree: Vec<String> = ring
        .reading_disagreements()?
        .into_iter()
        .map(|w| word(&ball, w))
        .collect();
    let mut table = format!(
        "{}\nindecomposable up to length {r} ({name} reading): {}\n",
        env.config(),
        found.len()
    );
    for w in &found {
        writeln!(table, "  {w}").unwrap();
    }
    if !disagree.is_empty() {
        writeln!(table, "readings disagree on: {}", disagree.join(" ")).unwrap();
    }
    let json = json!({"radius": r, "reading": name, "elements": found, "disagreements": disagree});
    Ok(Output::ok(json, table))
}

fn verify(env: &Env, which: &str) -> Result<Output> {
    let suites: Vec<Suite> = if which == "all" {
        Suite::ALL.to_vec()
    } else {
        vec![which.parse()?]
    };
    let r = env.cli.radius.unwrap_or(4);
    let mut reports = Vec::new();
    for suite in suites {
        let kl = env.kl(suite.outer_radius(r), r)?;
        let ctx = Context::from_parts(&env.system, kl, r, env.cli.seed)?;
        reports.push(suite.run(&ctx)?);
    }
    let failed = reports.iter().any(|rep| !rep.passed());
    let table = reports
        .iter()
        .map(|rep| rep.render_table())
        .collect::<Vec<_>>()
        .join("\n");
    Ok(Output {
        json: serde_json::to_value(&reports)?,
        table,
        failed,
    })
}
