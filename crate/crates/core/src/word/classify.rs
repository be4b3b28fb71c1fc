use serde::Serialize;

use super::ball::GroupBall;
use super::config::{GroupConfig, Order};
use super::gen::{Gen, GenSet};
use super::system::{CoxeterSystem, Element};
use crate::error::{Error, Result};

/// Largest rank-3 finite Coxeter group (H3) has a longest element of length 15.
const FINITE_SEARCH_RADIUS: usize = 64;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum GroupType {
    Finite,
    Affine,
    Other,
}

/// A finite standard parabolic subgroup `W_I` and its longest element.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Parabolic {
    #[serde(serialize_with = "ser_genset")]
    pub set: GenSet,
    pub longest: Element,
    pub weight: u64,
}

fn ser_genset<S: serde::Serializer>(g: &GenSet, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(&g.to_string())
}

#[derive(Clone, Debug, Serialize)]
pub struct ClassificationReport {
    pub config: GroupConfig,
    pub group_type: GroupType,
    pub finite_parabolics: Vec<Parabolic>,
    /// `N`, the largest `L(w_I)` over finite parabolics.
    pub n: u64,
    /// The longest elements of maximal weight, as parabolics.
    pub m: Vec<Parabolic>,
    /// Order of the finite Weyl group for affine types.
    pub w0_order: Option<usize>,
}

impl ClassificationReport {
    pub fn parabolic(&self, set: GenSet) -> Option<&Parabolic> {
        self.finite_parabolics.iter().find(|p| p.set == set)
    }

    pub fn is_in_m(&self, w: &Element) -> bool {
        self.m.iter().any(|p| &p.longest == w)
    }
}

/// Finite / affine / other via the triangle criterion on `Σ 1/m`.
pub fn group_type(config: &GroupConfig) -> GroupType {
    let (a, b, c) = match (config.m_sr(), config.m_st(), config.m_rt()) {
        (Order::Finite(a), Order::Finite(b), Order::Finite(c)) => (a as u64, b as u64, c as u64),
        _ => return GroupType::Other,
    };
    // compare 1/a + 1/b + 1/c with 1
    let lhs = b * c + a * c + a * b;
    let rhs = a * b * c;
    match lhs.cmp(&rhs) {
        std::cmp::Ordering::Greater => GroupType::Finite,
        std::cmp::Ordering::Equal => GroupType::Affine,
        std::cmp::Ordering::Less => GroupType::Other,
    }
}

/// Longest element of the dihedral parabolic `{a, b}`: the alternating word of
/// length `m_ab` starting with the smaller generator.
fn dihedral_longest(system: &CoxeterSystem, a: Gen, b: Gen, m: u32) -> Result<Element> {
    let (lo, hi) = if a < b { (a, b) } else { (b, a) };
    let word: Vec<Gen> = (0..m).map(|j| if j % 2 == 0 { lo } else { hi }).collect();
    let w = system.normalize(&word)?;
    if w.length() != m as usize {
        return Err(Error::Invariant(format!(
            "dihedral longest element for {lo}{hi} is not reduced"
        )));
    }
    Ok(w)
}

fn dihedral_weight(config: &GroupConfig, a: Gen, b: Gen, m: u32) -> u64 {
    let (la, lb) = (config.weight(a) as u64, config.weight(b) as u64);
    let m = m as u64;
    if m.is_multiple_of(2) {
        m / 2 * (la + lb)
    } else {
        // odd bonds force la == lb
        m * la
    }
}

pub fn classify(system: &CoxeterSystem) -> Result<ClassificationReport> {
    let config = *system.config();
    let gtype = group_type(&config);
    let mut parabolics = vec![Parabolic {
        set: GenSet::EMPTY,
        longest: system.identity(),
        weight: 0,
    }];
    for g in Gen::ALL {
        parabolics.push(Parabolic {
            set: GenSet::singleton(g),
            longest: system.generator(g),
            weight: config.weight(g) as u64,
        });
    }
    for (a, b) in [(Gen::R, Gen::S), (Gen::R, Gen::T), (Gen::S, Gen::T)] {
        if let Order::Finite(m) = config.m(a, b) {
            parabolics.push(Parabolic {
                set: GenSet::pair(a, b),
                longest: dihedral_longest(system, a, b, m)?,
                weight: dihedral_weight(&config, a, b, m),
            });
        }
    }
    if gtype == GroupType::Finite {
        let ball = GroupBall::enumerate(system, FINITE_SEARCH_RADIUS)?;
        if !ball.is_exhausted() {
            return Err(Error::Invariant("finite group not exhausted by enumeration".into()));
        }
        let top = ball.ids().last().expect("nonempty ball");
        if ball.level(ball.length(top)).len() != 1 {
            return Err(Error::Invariant("finite group has several longest elements".into()));
        }
        parabolics.push(Parabolic {
            set: GenSet::FULL,
            longest: ball.element(top),
            weight: ball.weight(top),
        });
    }
    let n = parabolics.iter().map(|p| p.weight).max().expect("nonempty");
    let m: Vec<Parabolic> = parabolics.iter().filter(|p| p.weight == n).cloned().collect();
    let w0_order = match gtype {
        GroupType::Affine => {
            let max_m = [config.m_sr(), config.m_st(), config.m_rt()]
                .iter()
                .filter_map(|o| o.finite())
                .max()
                .expect("affine orders are finite");
            Some(match max_m {
                3 => 6,
                4 => 8,
                6 => 12,
                other => return Err(Error::Invariant(format!("unexpected affine bond {other}"))),
            })
        }
        _ => None,
    };
    Ok(ClassificationReport {
        config,
        group_type: gtype,
        finite_parabolics: parabolics,
        n,
        m,
        w0_order,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn report(m: (u32, u32, u32), w: [u32; 3]) -> ClassificationReport {
        classify(&CoxeterSystem::new(GroupConfig::from_orders(m.0, m.1, m.2, w).unwrap())).unwrap()
    }

    #[test]
    fn affine_tilde_a2() {
        let r = report((3, 3, 3), [1, 1, 1]);
        assert_eq!(r.group_type, GroupType::Affine);
        assert_eq!(r.n, 3);
        let m: Vec<String> = r.m.iter().map(|p| p.longest.to_string()).collect();
        assert_eq!(m, vec!["rsr", "rtr", "sts"]);
        assert_eq!(r.w0_order, Some(6));
    }

    #[test]
    fn infinite_dihedral_times_a1() {
        let r = report((0, 2, 2), [1, 2, 1]);
        assert_eq!(r.group_type, GroupType::Other);
        let sets: Vec<String> = r.finite_parabolics.iter().map(|p| p.set.to_string()).collect();
        assert_eq!(sets, vec!["", "r", "s", "t", "rt", "st"]);
        assert_eq!(r.n, 3);
        assert_eq!(r.m.len(), 1);
        assert_eq!(r.m[0].longest.to_string(), "st");
    }

    #[test]
    fn finite_h3() {
        let r = report((2, 3, 5), [1, 1, 1]);
        assert_eq!(r.group_type, GroupType::Finite);
        let top = r.parabolic(GenSet::FULL).unwrap();
        assert_eq!(top.longest.length(), 15);
        assert_eq!(r.n, 15);
    }

    #[test]
    fn unequal_dihedral_weight() {
        let r = report((4, 2, 2), [1, 3, 1]);
        let sr = r.parabolic(GenSet::parse("rs").unwrap()).unwrap();
        assert_eq!(sr.weight, 8);
        assert_eq!(sr.longest.to_string(), "rsrs");
    }

    #[test]
    fn affine_orders() {
        assert_eq!(report((4, 4, 2), [1, 1, 1]).w0_order, Some(8));
        assert_eq!(report((6, 3, 2), [1, 1, 1]).w0_order, Some(12));
        assert_eq!(
            group_type(&GroupConfig::from_orders(7, 3, 2, [1, 1, 1]).unwrap()),
            GroupType::Other
        );
    }
}
