//! Star identification with knowledge of `n`, correct under weak fairness.
//!
//! A central agent is elected and counts `n - 1` distinct neighbours by
//! marking them. Two marked agents meeting proves the graph is not a star and
//! the absorbing `never` verdict floods the population.

use super::Configuration;
use crate::engine::{Output, Protocol, StateId};
use crate::error::{Error, Result};
use crate::graph::GraphClass;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum SiRole {
    /// Non-marked agent, `phi`.
    Unmarked,
    /// Marked agent, `phi'`.
    Marked,
    /// Marked candidate for the central agent, `l'`.
    Candidate,
    /// Central agent that has marked `i` neighbours, `2 <= i <= n - 1`.
    Central(u32),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Star {
    Yes,
    No,
    Never,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct SiState {
    pub lf: SiRole,
    pub star: Star,
}

impl SiState {
    pub const INITIAL: SiState = SiState { lf: SiRole::Unmarked, star: Star::No };

    pub fn new(lf: SiRole, star: Star) -> Self {
        SiState { lf, star }
    }

    /// `lf * 3 + star` with roles ordered `phi, phi', l', L_2 .. L_{n-1}`.
    pub fn encode(self) -> StateId {
        let lf = match self.lf {
            SiRole::Unmarked => 0,
            SiRole::Marked => 1,
            SiRole::Candidate => 2,
            SiRole::Central(i) => i + 1,
        };
        let star = match self.star {
            Star::Yes => 0,
            Star::No => 1,
            Star::Never => 2,
        };
        lf * 3 + star
    }

    pub fn decode(id: StateId) -> Self {
        let lf = match id / 3 {
            0 => SiRole::Unmarked,
            1 => SiRole::Marked,
            2 => SiRole::Candidate,
            i => SiRole::Central(i - 1),
        };
        let star = [Star::Yes, Star::No, Star::Never][(id % 3) as usize];
        SiState { lf, star }
    }
}

/// One interaction. Rules that the pseudocode states for an ordered pair are
/// matched on either orientation, which keeps the table symmetric.
pub fn transition(n: u32, mut a: SiState, mut b: SiState) -> (SiState, SiState) {
    use SiRole::*;
    if a.star == Star::Never || b.star == Star::Never {
        a.star = Star::Never;
        b.star = Star::Never;
        return (a, b);
    }
    {
        let (x, y) = if matches!(b.lf, Candidate | Central(_)) && a.lf == Unmarked { (&mut b, &mut a) } else { (&mut a, &mut b) };
        match (x.lf, y.lf) {
            (Unmarked, Unmarked) => {
                x.lf = Candidate;
                y.lf = Candidate;
            }
            (Candidate, Unmarked) => {
                x.lf = Central(2);
                y.lf = Marked;
            }
            (Central(i), Unmarked) if i <= n - 2 => {
                x.lf = Central(i + 1);
                y.lf = Marked;
            }
            _ => {}
        }
    }
    if a.lf == Central(n - 1) || b.lf == Central(n - 1) {
        a.star = Star::Yes;
        b.star = Star::Yes;
    }
    match (a.lf, b.lf) {
        (Marked, Marked) | (Marked, Candidate) | (Candidate, Marked) => {
            a.star = Star::Never;
            b.star = Star::Never;
        }
        _ => {}
    }
    if a.star == Star::Yes || b.star == Star::Yes {
        a.star = Star::Yes;
        b.star = Star::Yes;
    }
    (a, b)
}

pub fn state_count(n: usize) -> usize {
    if n <= 2 {
        1
    } else {
        3 * n + 3
    }
}

/// The star-identification protocol for a population of exactly `n` agents.
/// Populations of at most two agents are stars, so those get a one-state
/// protocol that always answers yes.
pub fn star_id(n: usize) -> Result<Protocol> {
    if n == 0 || n > 1 << 20 {
        return Err(Error::ProtocolSpec { spec: format!("star-id:n={n}"), reason: "n must be in 1..=2^20".into() });
    }
    let params = serde_json::json!({ "n": n });
    let p = if n <= 2 {
        Protocol::from_fn("star-id", params, 1, 0, |p, q| (p, q), |_| Output::Yes, |_| "(star,yes)".into())?
    } else {
        Protocol::from_fn(
            "star-id",
            params,
            state_count(n),
            SiState::INITIAL.encode(),
            |p, q| {
                let (a, b) = transition(n as u32, SiState::decode(p), SiState::decode(q));
                (a.encode(), b.encode())
            },
            |s| Output::from_bool(SiState::decode(s).star == Star::Yes),
            |s| {
                let st = SiState::decode(s);
                let lf = match st.lf {
                    SiRole::Unmarked => "phi".to_string(),
                    SiRole::Marked => "phi'".to_string(),
                    SiRole::Candidate => "l'".to_string(),
                    SiRole::Central(i) => format!("L{i}"),
                };
                let star = match st.star {
                    Star::Yes => "yes",
                    Star::No => "no",
                    Star::Never => "never",
                };
                format!("({lf},{star})")
            },
        )?
    };
    Ok(p.weak_fair()?.with_class(GraphClass::Star))
}

/// Both sides of the counting identity
/// `sum of L(v) over agents = #phi' + #L`, where `L(v) = i` for a central
/// agent `L_i` and 0 otherwise.
pub fn si_conservation(config: &Configuration) -> (u64, u64) {
    let mut lhs = 0u64;
    let mut rhs = 0u64;
    for &s in config.iter() {
        match SiState::decode(s).lf {
            SiRole::Central(i) => {
                lhs += i as u64;
                rhs += 1;
            }
            SiRole::Marked => rhs += 1,
            _ => {}
        }
    }
    (lhs, rhs)
}

/// Once some agent is `L_{n-1}`, the rest must be one `l'` and `n - 2`
/// `phi'` agents. Returns `None` while no agent has finished counting.
pub fn completed_layout_holds(n: usize, config: &Configuration) -> Option<bool> {
    let roles: Vec<SiRole> = config.iter().map(|&s| SiState::decode(s).lf).collect();
    if !roles.contains(&SiRole::Central(n as u32 - 1)) {
        return None;
    }
    let count = |r: SiRole| roles.iter().filter(|&&x| x == r).count();
    Some(count(SiRole::Central(n as u32 - 1)) == 1 && count(SiRole::Candidate) == 1 && count(SiRole::Marked) == n - 2)
}

#[cfg(test)]
mod tests {
    use super::SiRole::*;
    use super::Star::*;
    use super::*;

    fn s(lf: SiRole, star: Star) -> SiState {
        SiState::new(lf, star)
    }

    #[test]
    fn state_count_and_bijection() {
        for n in 3..12 {
            let p = star_id(n).unwrap();
            assert_eq!(p.state_count(), 3 * n + 3);
            for id in 0..p.state_count() as StateId {
                assert_eq!(SiState::decode(id).encode(), id);
            }
            assert!(p.symmetry_violations().is_empty());
        }
        assert_eq!(star_id(2).unwrap().state_count(), 1);
        assert_eq!(SiState::INITIAL.encode(), 1);
    }

    #[test]
    fn election_and_counting() {
        assert_eq!(transition(5, s(Unmarked, No), s(Unmarked, No)), (s(Candidate, No), s(Candidate, No)));
        assert_eq!(transition(5, s(Candidate, No), s(Unmarked, No)), (s(Central(2), No), s(Marked, No)));
        assert_eq!(transition(5, s(Unmarked, No), s(Candidate, No)), (s(Marked, No), s(Central(2), No)));
        assert_eq!(transition(5, s(Central(2), No), s(Unmarked, No)), (s(Central(3), No), s(Marked, No)));
        assert_eq!(transition(5, s(Central(3), No), s(Unmarked, No)), (s(Central(4), Yes), s(Marked, Yes)));
        // a full count never advances
        assert_eq!(transition(5, s(Central(4), Yes), s(Unmarked, No)), (s(Central(4), Yes), s(Unmarked, Yes)));
    }

    #[test]
    fn never_dominates() {
        assert_eq!(transition(5, s(Marked, No), s(Marked, No)), (s(Marked, Never), s(Marked, Never)));
        assert_eq!(transition(5, s(Candidate, Yes), s(Marked, Yes)), (s(Candidate, Never), s(Marked, Never)));
        assert_eq!(transition(5, s(Unmarked, Never), s(Central(2), Yes)), (s(Unmarked, Never), s(Central(2), Never)));
    }

    #[test]
    fn yes_spreads() {
        assert_eq!(transition(5, s(Marked, Yes), s(Central(4), No)), (s(Marked, Yes), s(Central(4), Yes)));
        assert_eq!(transition(5, s(Unmarked, No), s(Marked, Yes)), (s(Unmarked, Yes), s(Marked, Yes)));
    }

    #[test]
    fn conservation_examples() {
        let mut c = Configuration(vec![SiState::INITIAL.encode(); 4]);
        assert_eq!(si_conservation(&c), (0, 0));
        c[0] = s(Central(2), No).encode();
        c[1] = s(Marked, No).encode();
        assert_eq!(si_conservation(&c), (2, 2));
        c[0] = s(Central(3), No).encode();
        c[2] = s(Marked, No).encode();
        assert_eq!(si_conservation(&c), (3, 3));
    }

    #[test]
    fn layout_probe() {
        let enc = |r: SiRole| s(r, Yes).encode();
        let c = Configuration(vec![enc(Central(3)), enc(Candidate), enc(Marked), enc(Marked)]);
        assert_eq!(completed_layout_holds(4, &c), Some(true));
        let c = Configuration(vec![enc(Central(3)), enc(Candidate), enc(Marked), enc(Unmarked)]);
        assert_eq!(completed_layout_holds(4, &c), Some(false));
        let c = Configuration(vec![enc(Central(2)), enc(Candidate), enc(Marked), enc(Marked)]);
        assert_eq!(completed_layout_holds(4, &c), None);
        let c = Configuration(vec![enc(Central(2)), enc(Candidate), enc(Marked)]);
        assert_eq!(completed_layout_holds(3, &c), Some(true));
    }
}
