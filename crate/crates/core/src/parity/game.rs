//! Parity games and a recursive attractor-decomposition (Zielonka) solver.
//!
//! Convention: the maximal priority occurring infinitely often decides; even
//! means Verifier wins.

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Player {
    Verifier,
    Refuter,
}

impl Player {
    pub fn opponent(self) -> Player {
        match self {
            Player::Verifier => Player::Refuter,
            Player::Refuter => Player::Verifier,
        }
    }

    /// The player favoured by a priority.
    pub fn of_priority(p: u32) -> Player {
        if p.is_multiple_of(2) {
            Player::Verifier
        } else {
            Player::Refuter
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParityGame {
    owner: Vec<Player>,
    priority: Vec<u32>,
    succ: Vec<Vec<usize>>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Solution {
    pub winner: Vec<Player>,
    /// For each position owned by its winner, a successor that keeps the
    /// play winning; `None` for positions of the losing player.
    pub strategy: Vec<Option<usize>>,
}

impl Solution {
    pub fn region(&self, p: Player) -> Vec<usize> {
        (0..self.winner.len())
            .filter(|&v| self.winner[v] == p)
            .collect()
    }
}

impl ParityGame {
    /// Every position needs at least one successor; dead ends are modelled
    /// as self-loops whose priority declares the winner.
    pub fn new(owner: Vec<Player>, priority: Vec<u32>, succ: Vec<Vec<usize>>) -> Result<Self> {
        let n = owner.len();
        if priority.len() != n || succ.len() != n {
            return Err(Error::Game(
                "owner/priority/successor lengths differ".into(),
            ));
        }
        for (v, ws) in succ.iter().enumerate() {
            if ws.is_empty() {
                return Err(Error::Game(format!("position {v} has no successor")));
            }
            if let Some(&w) = ws.iter().find(|&&w| w >= n) {
                return Err(Error::Game(format!("edge {v} -> {w} leaves the game")));
            }
        }
        Ok(ParityGame {
            owner,
            priority,
            succ,
        })
    }

    pub fn len(&self) -> usize {
        self.owner.len()
    }

    pub fn is_empty(&self) -> bool {
        self.owner.is_empty()
    }

    pub fn owner(&self, v: usize) -> Player {
        self.owner[v]
    }

    pub fn priority(&self, v: usize) -> u32 {
        self.priority[v]
    }

    pub fn successors(&self, v: usize) -> &[usize] {
        &self.succ[v]
    }

    /// Owners swapped and priorities shifted by one.
    pub fn dual(&self) -> ParityGame {
        ParityGame {
            owner: self.owner.iter().map(|p| p.opponent()).collect(),
            priority: self.priority.iter().map(|p| p + 1).collect(),
            succ: self.succ.clone(),
        }
    }

    fn predecessors(&self) -> Vec<Vec<usize>> {
        let mut pred = vec![Vec::new(); self.len()];
        for (v, ws) in self.succ.iter().enumerate() {
            for &w in ws {
                pred[w].push(v);
            }
        }
        pred
    }
}

pub fn solve(game: &ParityGame) -> Solution {
    let n = game.len();
    let pred = game.predecessors();
    let mut winner = vec![Player::Verifier; n];
    let mut strategy = vec![None; n];
    let all = vec![true; n];
    zielonka(game, &pred, &all, &mut winner, &mut strategy);
    Solution { winner, strategy }
}

/// Attractor of `target` for `player` inside `arena`; records attractor moves
/// into `strategy`.
fn attractor(
    game: &ParityGame,
    pred: &[Vec<usize>],
    arena: &[bool],
    target: &[bool],
    player: Player,
    strategy: &mut [Option<usize>],
) -> Vec<bool> {
    let n = game.len();
    let mut attr = target.to_vec();
    let mut remaining: Vec<usize> = (0..n)
        .map(|v| {
            if arena[v] {
                game.succ[v].iter().filter(|&&w| arena[w]).count()
            } else {
                0
            }
        })
        .collect();
    let mut queue: Vec<usize> = (0..n).filter(|&v| attr[v]).collect();
    while let Some(w) = queue.pop() {
        for &v in &pred[w] {
            if !arena[v] || attr[v] {
                continue;
            }
            if game.owner[v] == player {
                attr[v] = true;
                strategy[v] = Some(w);
                queue.push(v);
            } else {
                remaining[v] -= 1;
                if remaining[v] == 0 {
                    attr[v] = true;
                    queue.push(v);
                }
            }
        }
    }
    attr
}

fn zielonka(
    game: &ParityGame,
    pred: &[Vec<usize>],
    arena: &[bool],
    winner: &mut [Player],
    strategy: &mut [Option<usize>],
) {
    let n = game.len();
    let Some(d) = (0..n).filter(|&v| arena[v]).map(|v| game.priority[v]).max() else {
        return;
    };
    let player = Player::of_priority(d);
    let opponent = player.opponent();
    let top: Vec<bool> = (0..n).map(|v| arena[v] && game.priority[v] == d).collect();
    let mut attr_strategy = vec![None; n];
    let attr = attractor(game, pred, arena, &top, player, &mut attr_strategy);
    let sub: Vec<bool> = (0..n).map(|v| arena[v] && !attr[v]).collect();
    zielonka(game, pred, &sub, winner, strategy);
    let opp_won: Vec<bool> = (0..n).map(|v| sub[v] && winner[v] == opponent).collect();
    if !opp_won.iter().any(|&b| b) {
        for v in 0..n {
            if !arena[v] {
                continue;
            }
            winner[v] = player;
            if game.owner[v] == player {
                if top[v] {
                    strategy[v] = game.succ[v].iter().copied().find(|&w| arena[w]);
                } else if attr[v] {
                    strategy[v] = attr_strategy[v];
                }
            } else if !sub[v] {
                strategy[v] = None;
            }
        }
        return;
    }
    let mut opp_strategy = vec![None; n];
    let b = attractor(game, pred, arena, &opp_won, opponent, &mut opp_strategy);
    for v in 0..n {
        if arena[v] && b[v] {
            winner[v] = opponent;
            if game.owner[v] == opponent && !opp_won[v] {
                strategy[v] = opp_strategy[v];
            } else if game.owner[v] != opponent {
                strategy[v] = None;
            }
        }
    }
    let rest: Vec<bool> = (0..n).map(|v| arena[v] && !b[v]).collect();
    zielonka(game, pred, &rest, winner, strategy);
}
