//! k-regular identification with an upper bound on the population size.
//!
//! Leader tokens merge level by level until one survives at the top level.
//! The surviving token walks the graph marking neighbours to check that its
//! current agent has degree exactly `k`, and carries the verdict `reg` along.

use super::Configuration;
use crate::engine::{Output, Protocol, StateId};
use crate::error::{Error, Result};
use crate::graph::GraphClass;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum KriToken {
    /// Leader token that has marked `x` agents.
    Leader(u8),
    Empty,
    Marked,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct KriState {
    pub lf: KriToken,
    pub level: u8,
    pub loc: bool,
    pub reg: bool,
}

/// Parameters and encoding of one kRI instance.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct KriParams {
    pub k: usize,
    pub bound: usize,
    /// The bound is the exact population size rather than an upper bound.
    pub exact: bool,
}

impl KriParams {
    pub fn new(k: usize, bound: usize, exact: bool) -> Result<Self> {
        let bad = |reason: &str| Error::ProtocolSpec { spec: format!("kreg-id:k={k},bound={bound}"), reason: reason.into() };
        if k == 0 || k > 200 {
            return Err(bad("k must be in 1..=200"));
        }
        if bound == 0 {
            return Err(bad("bound must be at least 1"));
        }
        Ok(KriParams { k, bound, exact })
    }

    /// Top of the level domain, `floor(log2 bound)`.
    pub fn max_level(&self) -> u8 {
        self.bound.ilog2() as u8
    }

    fn tokens(&self) -> usize {
        self.k + 3
    }

    pub fn state_count(&self) -> usize {
        self.tokens() * (self.max_level() as usize + 1) * 4
    }

    fn token_index(&self, t: KriToken) -> usize {
        match t {
            KriToken::Leader(x) => x as usize,
            KriToken::Empty => self.k + 1,
            KriToken::Marked => self.k + 2,
        }
    }

    pub fn encode(&self, s: KriState) -> StateId {
        let levels = self.max_level() as usize + 1;
        let id = ((self.token_index(s.lf) * levels + s.level as usize) * 2 + !s.loc as usize) * 2 + !s.reg as usize;
        id as StateId
    }

    pub fn decode(&self, id: StateId) -> KriState {
        let levels = self.max_level() as usize + 1;
        let id = id as usize;
        let reg = id.is_multiple_of(2);
        let loc = (id / 2).is_multiple_of(2);
        let level = ((id / 4) % levels) as u8;
        let t = id / 4 / levels;
        let lf = if t <= self.k {
            KriToken::Leader(t as u8)
        } else if t == self.k + 1 {
            KriToken::Empty
        } else {
            KriToken::Marked
        };
        KriState { lf, level, loc, reg }
    }

    pub fn initial(&self) -> KriState {
        KriState { lf: KriToken::Leader(0), level: 0, loc: false, reg: false }
    }

    /// True when `(a, b)` would merge two leader tokens on the top level,
    /// where the level cannot be raised any further.
    pub fn saturating_merge(&self, a: KriState, b: KriState) -> bool {
        a.level == b.level && a.level == self.max_level() && matches!(a.lf, KriToken::Leader(_)) && matches!(b.lf, KriToken::Leader(_))
    }

    pub fn transition(&self, mut a: KriState, mut b: KriState) -> (KriState, KriState) {
        use KriToken::*;
        let k = self.k as u8;
        if a.level == b.level {
            match (a.lf, b.lf) {
                (Leader(_), Leader(_)) => {
                    // saturates at the top level; see `saturating_merge`
                    a.level = (a.level + 1).min(self.max_level());
                    a.lf = Leader(0);
                    b.lf = Empty;
                    a.reg = false;
                    a.loc = false;
                }
                (Leader(x), Empty) if k >= 2 && x <= k - 2 => {
                    a.lf = Leader(x + 1);
                    b.lf = Marked;
                }
                (Leader(_), Marked) => {
                    a.lf = Empty;
                    b.lf = Leader(0);
                    b.reg = a.reg;
                }
                (Leader(x), Empty) if x == k - 1 => {
                    a.lf = Leader(k);
                    b.lf = Marked;
                    if !a.loc {
                        a.reg = true;
                        a.loc = true;
                    }
                }
                (Leader(x), Empty) if x == k => {
                    a.lf = Leader(0);
                    b.lf = Marked;
                    a.reg = false;
                }
                _ => {}
            }
            if !a.loc || !b.loc {
                a.reg = false;
                b.reg = false;
            }
        } else if a.level > b.level {
            b.level = a.level;
            b.loc = false;
            b.lf = Empty;
        }
        (a, b)
    }
}

pub fn kreg_id(k: usize, bound: usize, exact: bool) -> Result<Protocol> {
    let p = KriParams::new(k, bound, exact)?;
    Ok(Protocol::from_fn(
        "kreg-id",
        serde_json::json!({ "k": k, "bound": bound, "exact": exact }),
        p.state_count(),
        p.encode(p.initial()),
        |x, y| {
            let (a, b) = p.transition(p.decode(x), p.decode(y));
            (p.encode(a), p.encode(b))
        },
        |s| Output::from_bool(p.decode(s).reg),
        |s| {
            let st = p.decode(s);
            let lf = match st.lf {
                KriToken::Leader(x) => format!("L{x}"),
                KriToken::Empty => "phi".into(),
                KriToken::Marked => "phi'".into(),
            };
            let yn = |b: bool| if b { "yes" } else { "no" };
            format!("({lf},{},{},{})", st.level, yn(st.loc), yn(st.reg))
        },
    )?
    .with_class(GraphClass::KRegular(k)))
}

/// Per-configuration invariant probes.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, serde::Serialize)]
pub struct LevelProbe {
    pub max_level: u8,
    /// Some agent on the highest level holds a leader token.
    pub top_leader: bool,
}

pub fn level_probe(params: &KriParams, config: &Configuration) -> LevelProbe {
    let states: Vec<KriState> = config.iter().map(|&s| params.decode(s)).collect();
    let max_level = states.iter().map(|s| s.level).max().unwrap_or(0);
    let top_leader = states.iter().any(|s| s.level == max_level && matches!(s.lf, KriToken::Leader(_)));
    LevelProbe { max_level, top_leader }
}
