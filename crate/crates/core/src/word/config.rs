use std::fmt;
use std::path::Path;

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use super::gen::Gen;
use crate::error::{Error, Result};

/// Order of the product of two distinct generators.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Order {
    Finite(u32),
    Infinite,
}

impl Order {
    pub fn finite(self) -> Option<u32> {
        match self {
            Order::Finite(m) => Some(m),
            Order::Infinite => None,
        }
    }

    pub fn is_finite(self) -> bool {
        matches!(self, Order::Finite(_))
    }

    pub fn parse(s: &str) -> Result<Order> {
        let s = s.trim();
        if s.eq_ignore_ascii_case("inf") || s == "∞" {
            return Ok(Order::Infinite);
        }
        s.parse::<u32>()
            .map(Order::Finite)
            .map_err(|_| Error::Config(format!("bad order '{s}': expected an integer >= 2 or \"inf\"")))
    }
}

impl fmt::Display for Order {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Order::Finite(m) => write!(f, "{m}"),
            Order::Infinite => write!(f, "inf"),
        }
    }
}

impl Serialize for Order {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            Order::Finite(m) => s.serialize_u32(*m),
            Order::Infinite => s.serialize_str("inf"),
        }
    }
}

impl<'de> Deserialize<'de> for Order {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Raw {
            Num(u32),
            Str(String),
        }
        match Raw::deserialize(d)? {
            Raw::Num(m) => Ok(Order::Finite(m)),
            Raw::Str(s) => Order::parse(&s).map_err(serde::de::Error::custom),
        }
    }
}

/// A rank-3 weighted Coxeter system `(W, S, L)` on `S = {r, s, t}`.
///
/// Construction validates that every order is at least 2, every weight is
/// positive, and generators joined by an odd finite bond carry equal weight.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct GroupConfig {
    m_sr: Order,
    m_st: Order,
    m_rt: Order,
    weight_r: u32,
    weight_s: u32,
    weight_t: u32,
}

impl GroupConfig {
    /// Orders are given as `(m_sr, m_st, m_rt)` and weights as `[L(r), L(s), L(t)]`.
    pub fn new(m_sr: Order, m_st: Order, m_rt: Order, weights: [u32; 3]) -> Result<Self> {
        let cfg = GroupConfig {
            m_sr,
            m_st,
            m_rt,
            weight_r: weights[0],
            weight_s: weights[1],
            weight_t: weights[2],
        };
        cfg.validate()?;
        Ok(cfg)
    }

    /// Shorthand with `0` meaning infinity, e.g. `GroupConfig::from_orders(0, 2, 2, [1, 2, 1])`.
    pub fn from_orders(m_sr: u32, m_st: u32, m_rt: u32, weights: [u32; 3]) -> Result<Self> {
        let o = |m: u32| if m == 0 { Order::Infinite } else { Order::Finite(m) };
        GroupConfig::new(o(m_sr), o(m_st), o(m_rt), weights)
    }

    fn validate(&self) -> Result<()> {
        for (name, m) in [("sr", self.m_sr), ("st", self.m_st), ("rt", self.m_rt)] {
            if let Order::Finite(v) = m {
                if v < 2 {
                    return Err(Error::Config(format!("m_{name} = {v} must be >= 2")));
                }
            }
        }
        for g in Gen::ALL {
            if self.weight(g) == 0 {
                return Err(Error::Config(format!("weight of {g} must be positive")));
            }
        }
        for (a, b) in [(Gen::S, Gen::R), (Gen::S, Gen::T), (Gen::R, Gen::T)] {
            if let Order::Finite(m) = self.m(a, b) {
                if m % 2 == 1 && self.weight(a) != self.weight(b) {
                    return Err(Error::Config(format!(
                        "m_{a}{b} = {m} is odd, so L({a}) and L({b}) must agree (got {} and {})",
                        self.weight(a),
                        self.weight(b)
                    )));
                }
            }
        }
        Ok(())
    }

    /// Order of `ab`; `Finite(1)` when `a == b`.
    pub fn m(&self, a: Gen, b: Gen) -> Order {
        use Gen::*;
        match (a, b) {
            _ if a == b => Order::Finite(1),
            (S, R) | (R, S) => self.m_sr,
            (S, T) | (T, S) => self.m_st,
            (R, T) | (T, R) => self.m_rt,
            _ => unreachable!(),
        }
    }

    pub fn m_sr(&self) -> Order {
        self.m_sr
    }

    pub fn m_st(&self) -> Order {
        self.m_st
    }

    pub fn m_rt(&self) -> Order {
        self.m_rt
    }

    pub fn weight(&self, g: Gen) -> u32 {
        match g {
            Gen::R => self.weight_r,
            Gen::S => self.weight_s,
            Gen::T => self.weight_t,
        }
    }

    pub fn weights(&self) -> [u32; 3] {
        [self.weight_r, self.weight_s, self.weight_t]
    }

    /// `L` of a word, summing generator weights.
    pub fn word_weight(&self, w: &[Gen]) -> u64 {
        w.iter().map(|g| self.weight(*g) as u64).sum()
    }

    pub fn to_file(&self) -> ConfigFile {
        ConfigFile {
            m: OrdersFile {
                sr: self.m_sr,
                st: self.m_st,
                rt: self.m_rt,
            },
            weights: WeightsFile {
                r: self.weight_r,
                s: self.weight_s,
                t: self.weight_t,
            },
        }
    }

    /// Canonical JSON text, stable across runs; used for cache keys.
    pub fn canonical_json(&self) -> String {
        serde_json::to_string(&self.to_file()).expect("config serializes")
    }

    /// Hex SHA-256 of the canonical JSON form.
    pub fn hash_hex(&self) -> String {
        let digest = Sha256::digest(self.canonical_json().as_bytes());
        digest.iter().map(|b| format!("{b:02x}")).collect()
    }

    pub fn from_json_str(s: &str) -> Result<Self> {
        let f: ConfigFile = serde_json::from_str(s).map_err(|e| Error::Config(e.to_string()))?;
        f.into_config()
    }

    pub fn from_toml_str(s: &str) -> Result<Self> {
        let f: ConfigFile = toml::from_str(s).map_err(|e| Error::Config(e.to_string()))?;
        f.into_config()
    }

    /// Load a `.json` or `.toml` file (TOML when the extension says so, JSON otherwise).
    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| Error::Config(format!("{}: {e}", path.display())))?;
        match path.extension().and_then(|e| e.to_str()) {
            Some("toml") => Self::from_toml_str(&text),
            _ => Self::from_json_str(&text),
        }
    }
}

impl fmt::Display for GroupConfig {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "(m_sr,m_st,m_rt)=({},{},{}) L=(r:{},s:{},t:{})",
            self.m_sr, self.m_st, self.m_rt, self.weight_r, self.weight_s, self.weight_t
        )
    }
}

impl Serialize for GroupConfig {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.to_file().serialize(s)
    }
}

impl<'de> Deserialize<'de> for GroupConfig {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        ConfigFile::deserialize(d)?
            .into_config()
            .map_err(serde::de::Error::custom)
    }
}

/// On-disk form: `{"m": {"sr", "st", "rt"}, "weights": {"r", "s", "t"}}`.
#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ConfigFile {
    pub m: OrdersFile,
    pub weights: WeightsFile,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OrdersFile {
    pub sr: Order,
    pub st: Order,
    pub rt: Order,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct WeightsFile {
    pub r: u32,
    pub s: u32,
    pub t: u32,
}

impl ConfigFile {
    pub fn into_config(self) -> Result<GroupConfig> {
        GroupConfig::new(
            self.m.sr,
            self.m.st,
            self.m.rt,
            [self.weights.r, self.weights.s, self.weights.t],
        )
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_bad_configs() {
        assert!(GroupConfig::from_orders(1, 2, 2, [1, 1, 1]).is_err());
        assert!(GroupConfig::from_orders(0, 2, 2, [0, 1, 1]).is_err());
        // m_st = 3 forces L(s) = L(t)
        assert!(GroupConfig::from_orders(0, 3, 2, [1, 2, 1]).is_err());
        assert!(GroupConfig::from_orders(0, 3, 2, [2, 1, 1]).is_ok());
        // even bonds allow unequal weights
        assert!(GroupConfig::from_orders(0, 4, 2, [1, 2, 3]).is_ok());
    }

    #[test]
    fn json_and_toml() {
        let json = r#"{"m": {"sr": "inf", "st": 2, "rt": 2}, "weights": {"r": 1, "s": 2, "t": 1}}"#;
        let a = GroupConfig::from_json_str(json).unwrap();
        let toml = "[m]\nsr = \"inf\"\nst = 2\nrt = 2\n[weights]\nr = 1\ns = 2\nt = 1\n";
        let b = GroupConfig::from_toml_str(toml).unwrap();
        assert_eq!(a, b);
        assert_eq!(a.m(Gen::R, Gen::S), Order::Infinite);
        assert_eq!(a.m(Gen::T, Gen::S), Order::Finite(2));
        assert_eq!(
            a.canonical_json(),
            r#"{"m":{"sr":"inf","st":2,"rt":2},"weights":{"r":1,"s":2,"t":1}}"#
        );
        assert_eq!(a.hash_hex().len(), 64);
        assert!(GroupConfig::from_json_str(
            r#"{"m": {"sr": 1, "st": 2, "rt": 2}, "weights": {"r": 1, "s": 1, "t": 1}}"#
        )
        .is_err());
    }
}
