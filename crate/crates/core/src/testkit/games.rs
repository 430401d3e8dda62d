//! Random parity games and an exhaustive positional-strategy oracle.

use rand::Rng;

use crate::forest::graph::{can_reach, reachable_from};
use crate::parity::{ParityGame, Player};

/// A random game with `1..=max_positions` positions, priorities in
/// `0..=max_priority` and one to three successors per position.
pub fn random_game<R: Rng>(rng: &mut R, max_positions: usize, max_priority: u32) -> ParityGame {
    let n = rng.gen_range(1..=max_positions);
    let owner = (0..n)
        .map(|_| {
            if rng.gen_bool(0.5) {
                Player::Verifier
            } else {
                Player::Refuter
            }
        })
        .collect();
    let priority = (0..n).map(|_| rng.gen_range(0..=max_priority)).collect();
    let succ = (0..n)
        .map(|_| {
            let d = rng.gen_range(1..=3.min(n));
            let mut ws: Vec<usize> = (0..d).map(|_| rng.gen_range(0..n)).collect();
            ws.sort_unstable();
            ws.dedup();
            ws
        })
        .collect();
    ParityGame::new(owner, priority, succ).expect("well-formed random game")
}

/// Positions from which Refuter wins the one-player game `adj`: those that
/// reach a position of odd priority `p` lying on a cycle through
/// positions of priority at most `p`.
fn refuter_region(game: &ParityGame, adj: &[Vec<usize>]) -> Vec<bool> {
    let n = game.len();
    let mut bad = vec![false; n];
    for w in 0..n {
        let p = game.priority(w);
        if p.is_multiple_of(2) {
            continue;
        }
        let sub: Vec<Vec<usize>> = (0..n)
            .map(|v| {
                if game.priority(v) > p {
                    Vec::new()
                } else {
                    adj[v]
                        .iter()
                        .copied()
                        .filter(|&x| game.priority(x) <= p)
                        .collect()
                }
            })
            .collect();
        let from_w = reachable_from(&sub, &sub[w]);
        bad[w] = from_w[w];
    }
    can_reach(adj, &bad)
}

/// Winner of every position, by trying every positional Verifier strategy.
pub fn exhaustive_winners(game: &ParityGame) -> Vec<Player> {
    let n = game.len();
    let mine: Vec<usize> = (0..n)
        .filter(|&v| game.owner(v) == Player::Verifier)
        .collect();
    let mut choice = vec![0usize; mine.len()];
    let mut verifier = vec![false; n];
    loop {
        let mut adj: Vec<Vec<usize>> = (0..n).map(|v| game.successors(v).to_vec()).collect();
        for (i, &v) in mine.iter().enumerate() {
            adj[v] = vec![game.successors(v)[choice[i]]];
        }
        let lost = refuter_region(game, &adj);
        for v in 0..n {
            verifier[v] |= !lost[v];
        }
        let mut pos = 0;
        loop {
            if pos == mine.len() {
                return verifier
                    .into_iter()
                    .map(|w| if w { Player::Verifier } else { Player::Refuter })
                    .collect();
            }
            choice[pos] += 1;
            if choice[pos] < game.successors(mine[pos]).len() {
                break;
            }
            choice[pos] = 0;
            pos += 1;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn self_loops() {
        let g = ParityGame::new(
            vec![Player::Verifier, Player::Refuter],
            vec![2, 1],
            vec![vec![0, 1], vec![1]],
        )
        .unwrap();
        assert_eq!(
            exhaustive_winners(&g),
            vec![Player::Verifier, Player::Refuter]
        );
    }
}
