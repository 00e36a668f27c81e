//! Strong bisimulation by signature refinement.

use std::collections::{BTreeMap, HashMap, VecDeque};

use crate::semantics::{Action, Lts, Transition};

use super::{Trace, VerifyResult};

/// Block assignment after each refinement round; `rounds[0]` is the single
/// initial block.
struct Refinement {
    rounds: Vec<Vec<usize>>,
}

impl Refinement {
    fn last(&self) -> &[usize] {
        self.rounds.last().unwrap()
    }
}

/// Previous block and the sorted set of (label, target block) pairs.
type Signature<'a> = (usize, Vec<(&'a str, usize)>);

/// `succ[s]` lists `(label text, target)` pairs.
fn refine(succ: &[Vec<(&str, usize)>]) -> Refinement {
    let n = succ.len();
    let mut rounds = vec![vec![0; n]];
    let mut count = usize::from(n > 0);
    loop {
        let prev = rounds.last().unwrap();
        let mut sigs: Vec<Signature> = Vec::with_capacity(n);
        for (s, out) in succ.iter().enumerate() {
            let mut sig: Vec<(&str, usize)> = out.iter().map(|&(l, t)| (l, prev[t])).collect();
            sig.sort_unstable();
            sig.dedup();
            sigs.push((prev[s], sig));
        }
        let mut ids: BTreeMap<&Signature, usize> = BTreeMap::new();
        for s in &sigs {
            ids.entry(s).or_default();
        }
        for (i, v) in ids.values_mut().enumerate() {
            *v = i;
        }
        let next: Vec<usize> = sigs.iter().map(|s| ids[s]).collect();
        let new_count = ids.len();
        rounds.push(next);
        if new_count == count {
            return Refinement { rounds };
        }
        count = new_count;
    }
}

fn successors(lts: &Lts, offset: usize) -> Vec<Vec<(&str, usize)>> {
    (0..lts.num_states())
        .map(|s| {
            lts.outgoing(s)
                .iter()
                .map(|t| (lts.label_text(t.label), t.target + offset))
                .collect()
        })
        .collect()
}

/// Holds iff the initial states of `a` and `b` are strongly bisimilar, with
/// internal steps treated as ordinary labels.
///
/// On failure the evidence is a trace after which one system can take the
/// trace's last step into a state that no equally labelled step of the other
/// matches. If the other has no such step at all, the trace is one it cannot
/// perform.
pub fn bisim_equiv(a: &Lts, b: &Lts) -> VerifyResult {
    let mut succ = successors(a, 0);
    succ.extend(successors(b, a.num_states()));
    let r = refine(&succ);
    let (p, q) = (a.initial(), a.num_states() + b.initial());
    if r.last()[p] == r.last()[q] {
        return VerifyResult::holding(None);
    }
    let action = |s: usize, label: &str| -> Action {
        let (lts, s) = if s < a.num_states() { (a, s) } else { (b, s - a.num_states()) };
        lts.outgoing(s)
            .iter()
            .find(|t| lts.label_text(t.label) == label)
            .map(|t| lts.action(t.label).clone())
            .unwrap()
    };
    let mut trace = Vec::new();
    let (mut p, mut q) = (p, q);
    let mut level = r.rounds.iter().position(|blocks| blocks[p] != blocks[q]).unwrap();
    loop {
        let prev = &r.rounds[level - 1];
        // A step of one side whose (label, previous block) the other lacks.
        let missing = |x: usize, y: usize| {
            succ[x]
                .iter()
                .find(|&&(l, t)| !succ[y].iter().any(|&(l2, t2)| l2 == l && prev[t2] == prev[t]))
                .copied()
        };
        let (x, y, (label, xt)) = match missing(p, q) {
            Some(step) => (p, q, step),
            None => (q, p, missing(q, p).expect("signatures differ")),
        };
        trace.push(action(x, label));
        let Some(&(_, yt)) = succ[y].iter().find(|&&(l, _)| l == label) else {
            return VerifyResult::failing(Some(Trace(trace)));
        };
        if level == 1 {
            return VerifyResult::failing(Some(Trace(trace)));
        }
        (p, q) = (xt, yt);
        level = r.rounds.iter().position(|blocks| blocks[p] != blocks[q]).unwrap();
    }
}

/// The quotient of `lts` under strong bisimulation, restricted to reachable
/// blocks and renumbered breadth first (ties: label text, then target).
pub fn minimize(lts: &Lts) -> Lts {
    let succ = successors(lts, 0);
    let r = refine(&succ);
    let block = r.last();
    let nblocks = block.iter().max().map_or(0, |m| m + 1);
    // Representative: smallest original state in each block.
    let mut rep = vec![usize::MAX; nblocks];
    for (s, &b) in block.iter().enumerate() {
        rep[b] = rep[b].min(s);
    }
    let mut out: Vec<Vec<(&str, usize, usize)>> = vec![Vec::new(); nblocks];
    for t in lts.transitions() {
        if t.source == rep[block[t.source]] {
            out[block[t.source]].push((lts.label_text(t.label), rep[block[t.target]], t.label));
        }
    }
    for o in &mut out {
        o.sort_unstable();
        o.dedup_by(|x, y| x.0 == y.0 && x.1 == y.1);
    }
    let mut id = vec![usize::MAX; nblocks];
    let start = block[lts.initial()];
    id[start] = 0;
    let mut order = vec![start];
    let mut queue = VecDeque::from([start]);
    let mut labels: Vec<Action> = Vec::new();
    let mut label_ids: HashMap<&str, usize> = HashMap::new();
    let mut transitions = Vec::new();
    while let Some(b) = queue.pop_front() {
        for &(text, target_rep, label) in &out[b] {
            let tb = block[target_rep];
            if id[tb] == usize::MAX {
                id[tb] = order.len();
                order.push(tb);
                queue.push_back(tb);
            }
            let l = *label_ids.entry(text).or_insert_with(|| {
                labels.push(lts.action(label).clone());
                labels.len() - 1
            });
            transitions.push(Transition {
                source: id[b],
                label: l,
                target: id[tb],
            });
        }
    }
    Lts::new(order.len(), labels, transitions)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::semantics::{generate_lts, ExplorationBudget};
    use crate::syntax::parse_spec;

    fn lts(b: &str) -> Lts {
        let s = parse_spec(&format!("specification T [a, b, c] : exit behaviour {b} endspec")).unwrap();
        generate_lts(&s, ExplorationBudget::default()).unwrap()
    }

    #[test]
    fn duplicate_branches() {
        assert!(bisim_equiv(&lts("a; stop"), &lts("a; stop [] a; stop")).holds());
        let m = minimize(&lts("a; stop [] a; stop"));
        assert_eq!((m.num_states(), m.num_transitions()), (2, 1));
    }

    #[test]
    fn stop_versus_exit() {
        let r = bisim_equiv(&lts("stop"), &lts("exit"));
        assert!(!r.holds());
        assert_eq!(r.evidence.unwrap().to_string(), "exit");
    }

    #[test]
    fn enable_is_internal_step() {
        assert!(bisim_equiv(&lts("exit >> b; stop"), &lts("i; b; stop")).holds());
    }

    #[test]
    fn branching_difference_is_located() {
        let r = bisim_equiv(&lts("a; (b; stop [] c; stop)"), &lts("a; b; stop [] a; c; stop"));
        assert!(!r.holds());
        let t = r.evidence.unwrap().to_string();
        assert!(t == "a; b" || t == "a; c", "{t}");
    }

    #[test]
    fn minimize_is_idempotent() {
        let l = lts("(a; stop ||| a; stop) [] a; a; stop");
        let m = minimize(&l);
        assert_eq!(m.num_states(), 3);
        assert_eq!(minimize(&m), m);
        assert_eq!(minimize(&lts("stop")).num_states(), 1);
    }
}
