//! Tree identification without initial knowledge (18 states).
//!
//! Agents elect one right, one left and one leader token, then repeatedly run
//! trials: the left and right tokens are parked next to each other in trial
//! mode as a landmark, and the leader tries to walk from the right side of the
//! landmark to the left side without crossing it. A successful trial proves a
//! cycle and the leader switches `tre` to no; the leader's `tre` is copied to
//! every agent it visits.

use super::{Configuration, Protocol};
use crate::engine::{Output, StateId};
use crate::graph::GraphClass;

/// Token held by an agent. Declaration order defines the state encoding.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum TiToken {
    /// Default leader token, `L`.
    Leader,
    /// Left token outside a trial, `L_l`.
    Left,
    /// Right token outside a trial, `L_r`.
    Right,
    /// Leader searching for the left token during a trial, `L^t_se`.
    TrialSearch,
    /// Leader that has confirmed the parked left token, `L^t_se'`.
    TrialConfirmed,
    /// Leader sitting next to a freshly parked left token, `L_se'`.
    BesideLeft,
    /// Left token parked for a trial, `L^t_l`.
    TrialLeft,
    /// Right token parked for a trial, `L^t_r`.
    TrialRight,
    /// No token, `phi`.
    Empty,
}

impl TiToken {
    pub const ALL: [TiToken; 9] = [
        TiToken::Leader,
        TiToken::Left,
        TiToken::Right,
        TiToken::TrialSearch,
        TiToken::TrialConfirmed,
        TiToken::BesideLeft,
        TiToken::TrialLeft,
        TiToken::TrialRight,
        TiToken::Empty,
    ];

    pub fn is_leader(self) -> bool {
        matches!(self, TiToken::Leader | TiToken::TrialSearch | TiToken::TrialConfirmed | TiToken::BesideLeft)
    }

    pub fn is_left(self) -> bool {
        matches!(self, TiToken::Left | TiToken::TrialLeft)
    }

    pub fn is_right(self) -> bool {
        matches!(self, TiToken::Right | TiToken::TrialRight)
    }

    fn label(self) -> &'static str {
        match self {
            TiToken::Leader => "L",
            TiToken::Left => "L_l",
            TiToken::Right => "L_r",
            TiToken::TrialSearch => "Lt_se",
            TiToken::TrialConfirmed => "Lt_se'",
            TiToken::BesideLeft => "L_se'",
            TiToken::TrialLeft => "Lt_l",
            TiToken::TrialRight => "Lt_r",
            TiToken::Empty => "phi",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct TiState {
    pub token: TiToken,
    pub tre: bool,
}

impl TiState {
    pub const INITIAL: TiState = TiState { token: TiToken::Right, tre: true };
    pub const COUNT: usize = 18;

    pub fn new(token: TiToken, tre: bool) -> Self {
        TiState { token, tre }
    }

    pub fn encode(self) -> StateId {
        let t = TiToken::ALL.iter().position(|&x| x == self.token).unwrap() as StateId;
        t * 2 + if self.tre { 0 } else { 1 }
    }

    pub fn decode(id: StateId) -> Self {
        TiState { token: TiToken::ALL[(id / 2) as usize], tre: id.is_multiple_of(2) }
    }
}

/// One interaction, initiator `a` and responder `b`, as a first-match rule
/// chain.
pub fn transition(mut a: TiState, mut b: TiState) -> (TiState, TiState) {
    use TiToken::*;
    if a.token.is_right() && b.token.is_right() {
        b.token = Left;
    } else if a.token.is_left() && b.token.is_left() {
        b.token = Leader;
    } else if a.token.is_leader() && b.token.is_leader() {
        a.token = Leader;
        b.token = Empty;
        a.tre = true;
    } else if a.token != Empty && b.token == Empty {
        // movement
        if a.token.is_leader() {
            b.tre = a.tre;
        }
        a.token = match a.token {
            TrialLeft => Left,
            TrialRight => Right,
            BesideLeft | TrialConfirmed => Leader,
            t => t,
        };
        std::mem::swap(&mut a.token, &mut b.token);
    } else if a.token == Leader && b.token == Left {
        a.token = TrialLeft;
        b.token = BesideLeft;
        b.tre = a.tre;
    } else if a.token == BesideLeft && b.token == Right {
        a.token = TrialRight;
        b.token = TrialSearch;
        b.tre = a.tre;
    } else if a.token == TrialSearch && b.token == TrialLeft {
        a.token = Left;
        b.token = TrialConfirmed;
        b.tre = a.tre;
    } else if a.token == TrialConfirmed && b.token == TrialRight {
        a.token = Right;
        b.token = Leader;
        b.tre = false;
    } else if a.token != Empty && b.token != Empty {
        // two different token kinds meet: reset trial modes and swap
        if a.token.is_leader() {
            b.tre = a.tre;
        } else if b.token.is_leader() {
            a.tre = b.tre;
        }
        for s in [&mut a, &mut b] {
            s.token = match s.token {
                TrialLeft => Left,
                TrialRight => Right,
                BesideLeft | TrialSearch | TrialConfirmed => Leader,
                t => t,
            };
        }
        std::mem::swap(&mut a.token, &mut b.token);
    }
    (a, b)
}

pub fn tree_id() -> Protocol {
    Protocol::from_fn(
        "tree-id",
        serde_json::json!({}),
        TiState::COUNT,
        TiState::INITIAL.encode(),
        |p, q| {
            let (a, b) = transition(TiState::decode(p), TiState::decode(q));
            (a.encode(), b.encode())
        },
        |s| Output::from_bool(TiState::decode(s).tre),
        |s| {
            let st = TiState::decode(s);
            format!("({},{})", st.token.label(), if st.tre { "yes" } else { "no" })
        },
    )
    .expect("tree-id table is well formed")
    .with_class(GraphClass::Tree)
}

/// Numbers of right, left and leader tokens in a configuration.
#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize)]
pub struct TokenCensus {
    pub right: usize,
    pub left: usize,
    pub leader: usize,
}

impl TokenCensus {
    pub const ELECTED: TokenCensus = TokenCensus { right: 1, left: 1, leader: 1 };
}

pub fn token_census(config: &Configuration) -> TokenCensus {
    let mut c = TokenCensus { right: 0, left: 0, leader: 0 };
    for &s in config.iter() {
        let t = TiState::decode(s).token;
        c.right += t.is_right() as usize;
        c.left += t.is_left() as usize;
        c.leader += t.is_leader() as usize;
    }
    c
}
