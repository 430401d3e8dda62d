//! Membership of a regular forest in the language of a parity automaton.
//!
//! Verifier positions are `(node, state)`. A Verifier move picks a
//! transition item together with a state for every child; only the induced
//! set of `(child, state)` pairs matters to Refuter, so moves are represented
//! by the inclusion-minimal such sets. Refuter then descends to one pair.

use std::collections::HashMap;

use super::automaton::ParityForestAutomaton;
use super::game::{solve, ParityGame, Player};
use super::nfa::Nfa;
use crate::error::{Error, Result};
use crate::forest::{graph, ForestGraph, Label, NodeId};

/// Sorted set of `(child node, automaton state)` pairs.
type PairSet = Vec<(NodeId, usize)>;

fn is_subset(a: &PairSet, b: &PairSet) -> bool {
    let mut j = 0;
    for x in a {
        while j < b.len() && b[j] < *x {
            j += 1;
        }
        if j == b.len() || b[j] != *x {
            return false;
        }
        j += 1;
    }
    true
}

fn insert_minimal(family: &mut Vec<PairSet>, s: PairSet) {
    if family.iter().any(|f| is_subset(f, &s)) {
        return;
    }
    family.retain(|f| !is_subset(&s, f));
    family.push(s);
}

fn union(a: &PairSet, b: &PairSet) -> PairSet {
    let mut out = a.clone();
    out.extend(b.iter().copied());
    out.sort_unstable();
    out.dedup();
    out
}

/// Inclusion-minimal pair sets induced by state sequences over `children`
/// accepted by `nfa`.
fn minimal_assignments(nfa: &Nfa, children: &[NodeId]) -> Vec<PairSet> {
    let mut cur: Vec<Vec<PairSet>> = vec![Vec::new(); nfa.len()];
    for &p in &nfa.initial {
        insert_minimal(&mut cur[p], Vec::new());
    }
    for &c in children {
        let mut next: Vec<Vec<PairSet>> = vec![Vec::new(); nfa.len()];
        for p in 0..nfa.len() {
            if cur[p].is_empty() {
                continue;
            }
            for &(q, p2) in &nfa.edges[p] {
                for s in &cur[p] {
                    let mut t = s.clone();
                    if let Err(pos) = t.binary_search(&(c, q)) {
                        t.insert(pos, (c, q));
                    }
                    insert_minimal(&mut next[p2], t);
                }
            }
        }
        cur = next;
    }
    let mut out = Vec::new();
    for p in 0..nfa.len() {
        if nfa.finals[p] {
            for s in std::mem::take(&mut cur[p]) {
                insert_minimal(&mut out, s);
            }
        }
    }
    out
}

/// Minimal Verifier moves at `(node, state)`.
fn moves(aut: &ParityForestAutomaton, g: &ForestGraph, v: NodeId, q: usize) -> Vec<PairSet> {
    let node = &g.nodes()[v];
    let mut by_edge: Vec<(usize, Vec<NodeId>)> = Vec::new();
    for (e, c) in g.sorted_children(v) {
        match by_edge.last_mut() {
            Some((le, cs)) if *le == e => cs.push(c),
            _ => by_edge.push((e, vec![c])),
        }
    }
    let mut out = Vec::new();
    'items: for item in aut.items(q, &node.label) {
        if by_edge.iter().any(|(e, _)| item.constraint(*e).is_none()) {
            continue;
        }
        let mut combos: Vec<PairSet> = vec![Vec::new()];
        for (e, nfa) in &item.children {
            let cs = by_edge
                .iter()
                .find(|(le, _)| le == e)
                .map(|(_, cs)| cs.as_slice())
                .unwrap_or(&[]);
            let opts = minimal_assignments(nfa, cs);
            if opts.is_empty() {
                continue 'items;
            }
            let mut next = Vec::new();
            for a in &combos {
                for b in &opts {
                    insert_minimal(&mut next, union(a, b));
                }
            }
            combos = next;
        }
        for c in combos {
            insert_minimal(&mut out, c);
        }
    }
    out
}

fn check_alphabet(aut: &ParityForestAutomaton, g: &ForestGraph) -> Result<()> {
    for v in g.reachable() {
        let label = &g.nodes()[v].label;
        if let Label::Sym(s) = label {
            if !g.alphabet().contains(s) && !aut.delta.keys().any(|(_, l)| l == label) {
                return Err(Error::UnknownSymbol(s.clone()));
            }
        }
    }
    Ok(())
}

/// The membership game together with its initial position.
#[derive(Debug, Clone)]
pub struct MembershipGame {
    pub game: ParityGame,
    pub initial: usize,
}

struct Builder<'a> {
    aut: &'a ParityForestAutomaton,
    g: &'a ForestGraph,
    /// Nodes whose subtree is finite: their states are resolved directly.
    finite_accepting: Option<&'a [Vec<bool>]>,
    owner: Vec<Player>,
    priority: Vec<u32>,
    succ: Vec<Vec<usize>>,
    verifier: HashMap<(NodeId, usize), usize>,
    refuter: HashMap<PairSet, usize>,
    pending: Vec<(usize, NodeId, usize)>,
    win: Option<usize>,
    lose: Option<usize>,
}

impl Builder<'_> {
    fn add(&mut self, owner: Player, priority: u32) -> usize {
        self.owner.push(owner);
        self.priority.push(priority);
        self.succ.push(Vec::new());
        self.owner.len() - 1
    }

    fn win(&mut self) -> usize {
        if let Some(w) = self.win {
            return w;
        }
        let w = self.add(Player::Verifier, 0);
        self.succ[w].push(w);
        self.win = Some(w);
        w
    }

    fn lose(&mut self) -> usize {
        if let Some(l) = self.lose {
            return l;
        }
        let l = self.add(Player::Refuter, 1);
        self.succ[l].push(l);
        self.lose = Some(l);
        l
    }

    fn verifier_pos(&mut self, v: NodeId, q: usize) -> usize {
        if let Some(table) = self.finite_accepting {
            if !table[v].is_empty() {
                return if table[v][q] { self.win() } else { self.lose() };
            }
        }
        if let Some(&p) = self.verifier.get(&(v, q)) {
            return p;
        }
        let p = self.add(Player::Verifier, self.aut.priority[q]);
        self.verifier.insert((v, q), p);
        self.pending.push((p, v, q));
        p
    }

    fn refuter_pos(&mut self, set: PairSet) -> usize {
        if let Some(&p) = self.refuter.get(&set) {
            return p;
        }
        let p = self.add(Player::Refuter, 0);
        self.refuter.insert(set.clone(), p);
        let targets: Vec<usize> = set.iter().map(|&(c, q)| self.verifier_pos(c, q)).collect();
        self.succ[p] = targets;
        p
    }

    /// Verifier choosing among `options`; an empty option wins outright.
    fn fill_choice(&mut self, p: usize, options: Vec<PairSet>) {
        if options.iter().any(|o| o.is_empty()) {
            self.priority[p] = 0;
            self.succ[p] = vec![p];
            return;
        }
        if options.is_empty() {
            self.owner[p] = Player::Refuter;
            self.priority[p] = 1;
            self.succ[p] = vec![p];
            return;
        }
        let targets = options.into_iter().map(|o| self.refuter_pos(o)).collect();
        self.succ[p] = targets;
    }

    fn run(mut self) -> MembershipGame {
        let init = self.add(Player::Verifier, 0);
        let roots: Vec<NodeId> = self.g.roots().to_vec();
        let opts = minimal_assignments(&self.aut.root, &roots);
        self.fill_choice(init, opts);
        while let Some((p, v, q)) = self.pending.pop() {
            let opts = moves(self.aut, self.g, v, q);
            self.fill_choice(p, opts);
        }
        let game = ParityGame::new(self.owner, self.priority, self.succ)
            .expect("membership game is total");
        MembershipGame {
            game,
            initial: init,
        }
    }
}

/// Builds the full membership game (no shortcut for finite subtrees).
pub fn membership_game(aut: &ParityForestAutomaton, g: &ForestGraph) -> Result<MembershipGame> {
    check_alphabet(aut, g)?;
    Ok(new_builder(aut, g, None).run())
}

fn new_builder<'a>(
    aut: &'a ParityForestAutomaton,
    g: &'a ForestGraph,
    finite_accepting: Option<&'a [Vec<bool>]>,
) -> Builder<'a> {
    Builder {
        aut,
        g,
        finite_accepting,
        owner: Vec::new(),
        priority: Vec::new(),
        succ: Vec::new(),
        verifier: HashMap::new(),
        refuter: HashMap::new(),
        pending: Vec::new(),
        win: None,
        lose: None,
    }
}

/// For every node whose subtree is finite, the states from which the
/// subtree is accepted; empty vectors mark nodes that reach a cycle.
fn finite_states(aut: &ParityForestAutomaton, g: &ForestGraph) -> Vec<Vec<bool>> {
    let adj = g.adjacency();
    let cyc = graph::on_cycle(&adj);
    let reaches_cycle = graph::can_reach(&adj, &cyc);
    let n = g.len();
    let mut table: Vec<Vec<bool>> = vec![Vec::new(); n];
    let mut done = vec![false; n];
    // post-order over the finite part
    for start in g.reachable() {
        if reaches_cycle[start] || done[start] {
            continue;
        }
        let mut stack = vec![(start, false)];
        while let Some((v, expanded)) = stack.pop() {
            if done[v] {
                continue;
            }
            if !expanded {
                stack.push((v, true));
                for &(_, c) in &g.nodes()[v].children {
                    if !done[c] {
                        stack.push((c, false));
                    }
                }
                continue;
            }
            table[v] = accepted_states(aut, g, v, &table);
            done[v] = true;
        }
    }
    table
}

fn accepted_states(
    aut: &ParityForestAutomaton,
    g: &ForestGraph,
    v: NodeId,
    table: &[Vec<bool>],
) -> Vec<bool> {
    let node = &g.nodes()[v];
    let children = g.sorted_children(v);
    (0..aut.states.len())
        .map(|q| {
            aut.items(q, &node.label).iter().any(|item| {
                if children.iter().any(|(e, _)| item.constraint(*e).is_none()) {
                    return false;
                }
                item.children.iter().all(|(e, nfa)| {
                    let choices: Vec<Vec<bool>> = children
                        .iter()
                        .filter(|(ce, _)| ce == e)
                        .map(|&(_, c)| table[c].clone())
                        .collect();
                    nfa.accepts_choices(&choices)
                })
            })
        })
        .collect()
}

/// Whether `aut` accepts the unravelling of `g`.
pub fn accepts(aut: &ParityForestAutomaton, g: &ForestGraph) -> Result<bool> {
    check_alphabet(aut, g)?;
    let table = finite_states(aut, g);
    if g.roots().iter().all(|&r| !table[r].is_empty()) {
        let choices: Vec<Vec<bool>> = g.roots().iter().map(|&r| table[r].clone()).collect();
        return Ok(aut.root.accepts_choices(&choices));
    }
    let mg = new_builder(aut, g, Some(&table)).run();
    let sol = solve(&mg.game);
    Ok(sol.winner[mg.initial] == Player::Verifier)
}

/// Decides acceptance through the full game only.
pub fn accepts_via_game(aut: &ParityForestAutomaton, g: &ForestGraph) -> Result<bool> {
    let mg = membership_game(aut, g)?;
    Ok(solve(&mg.game).winner[mg.initial] == Player::Verifier)
}
