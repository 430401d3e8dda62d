//! Small directed-graph helpers shared by forests, types and games.

/// Strongly connected components (Tarjan, iterative). Components are
/// returned in reverse topological order: successors before predecessors.
pub fn scc(adj: &[Vec<usize>]) -> Vec<Vec<usize>> {
    let n = adj.len();
    let mut index = vec![usize::MAX; n];
    let mut low = vec![0; n];
    let mut on_stack = vec![false; n];
    let mut stack = Vec::new();
    let mut comps = Vec::new();
    let mut next = 0;
    for start in 0..n {
        if index[start] != usize::MAX {
            continue;
        }
        // (node, next child position)
        let mut work = vec![(start, 0usize)];
        index[start] = next;
        low[start] = next;
        next += 1;
        stack.push(start);
        on_stack[start] = true;
        while let Some(&mut (v, ref mut pos)) = work.last_mut() {
            if *pos < adj[v].len() {
                let w = adj[v][*pos];
                *pos += 1;
                if index[w] == usize::MAX {
                    index[w] = next;
                    low[w] = next;
                    next += 1;
                    stack.push(w);
                    on_stack[w] = true;
                    work.push((w, 0));
                } else if on_stack[w] {
                    low[v] = low[v].min(index[w]);
                }
            } else {
                work.pop();
                if let Some(&(u, _)) = work.last() {
                    low[u] = low[u].min(low[v]);
                }
                if low[v] == index[v] {
                    let mut comp = Vec::new();
                    loop {
                        let w = stack.pop().expect("tarjan stack");
                        on_stack[w] = false;
                        comp.push(w);
                        if w == v {
                            break;
                        }
                    }
                    comps.push(comp);
                }
            }
        }
    }
    comps
}

/// `true` for nodes lying on a directed cycle (self-loops included).
pub fn on_cycle(adj: &[Vec<usize>]) -> Vec<bool> {
    let mut out = vec![false; adj.len()];
    for comp in scc(adj) {
        if comp.len() > 1 {
            for v in comp {
                out[v] = true;
            }
        } else {
            let v = comp[0];
            if adj[v].contains(&v) {
                out[v] = true;
            }
        }
    }
    out
}

/// Nodes reachable from `sources` in zero or more steps.
pub fn reachable_from(adj: &[Vec<usize>], sources: &[usize]) -> Vec<bool> {
    let mut seen = vec![false; adj.len()];
    let mut stack: Vec<usize> = sources.to_vec();
    while let Some(v) = stack.pop() {
        if seen[v] {
            continue;
        }
        seen[v] = true;
        stack.extend(adj[v].iter().copied().filter(|&w| !seen[w]));
    }
    seen
}

/// Nodes that can reach some node in `targets` in zero or more steps.
pub fn can_reach(adj: &[Vec<usize>], targets: &[bool]) -> Vec<bool> {
    let n = adj.len();
    let mut rev = vec![Vec::new(); n];
    for (v, ws) in adj.iter().enumerate() {
        for &w in ws {
            rev[w].push(v);
        }
    }
    let sources: Vec<usize> = (0..n).filter(|&v| targets[v]).collect();
    reachable_from(&rev, &sources)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cycles_and_reachability() {
        // 0 -> 1 -> 2 -> 1, 3 -> 3, 4
        let adj = vec![vec![1], vec![2], vec![1], vec![3], vec![]];
        assert_eq!(on_cycle(&adj), vec![false, true, true, true, false]);
        assert_eq!(
            reachable_from(&adj, &[0]),
            vec![true, true, true, false, false]
        );
        let t = vec![false, false, true, false, false];
        assert_eq!(can_reach(&adj, &t), vec![true, true, true, false, false]);
        let comps = scc(&adj);
        assert_eq!(comps.len(), 4);
    }
}
