//! Independent oracles and generators shared by the integration tests.
//!
//! Nothing here calls the library's semantics, query evaluator or search
//! code: the oracles work directly on the syntax tree, fact base and LTS
//! structure.

#![allow(dead_code)]

use std::collections::{BTreeSet, HashMap, VecDeque};
use std::path::PathBuf;

use lotos_asc::contracts::{Atom, Fact, FactBase, Predicate, Query, Term};
use lotos_asc::semantics::Lts;
use lotos_asc::syntax::{
    ActionExpr, BehaviorExpr, Functionality, Loc, OfferExpr, SortDecl, Specification, SyncSet, ValueExpr,
};
use lotos_asc::verify::read_aut;
use proptest::prelude::*;

pub fn corpus(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../corpus").join(name)
}

pub fn read_corpus(name: &str) -> String {
    std::fs::read_to_string(corpus(name)).unwrap()
}

pub const CORPUS_LOT: [&str; 5] = [
    "client_server.lot",
    "multicast.lot",
    "multicast_unordered.lot",
    "observer.lot",
    "deadlocked.lot",
];

// ---------------------------------------------------------------------------
// SOS oracle over the syntax tree
// ---------------------------------------------------------------------------

/// A transition system produced by the oracle, with labels as text.
#[derive(Debug)]
pub struct OracleLts {
    pub states: Vec<BehaviorExpr>,
    pub transitions: Vec<(usize, String, usize)>,
}

impl OracleLts {
    pub fn num_states(&self) -> usize {
        self.states.len()
    }

    pub fn num_transitions(&self) -> usize {
        self.transitions.len()
    }

    pub fn to_aut(&self) -> String {
        let mut s = format!("des (0, {}, {})\n", self.transitions.len(), self.states.len());
        for (a, l, b) in &self.transitions {
            s.push_str(&format!("({a}, \"{l}\", {b})\n"));
        }
        s
    }

    pub fn to_lts(&self) -> Lts {
        read_aut(&self.to_aut()).unwrap()
    }
}

pub struct Sos<'a> {
    spec: &'a Specification,
}

const EXIT: &str = "exit";

impl<'a> Sos<'a> {
    pub fn new(spec: &'a Specification) -> Self {
        Sos { spec }
    }

    /// Every `(label, successor)` pair derivable by one rule application.
    pub fn steps(&self, b: &BehaviorExpr) -> Vec<(String, BehaviorExpr)> {
        self.steps_depth(b, 0)
    }

    fn steps_depth(&self, b: &BehaviorExpr, depth: usize) -> Vec<(String, BehaviorExpr)> {
        assert!(depth < 500, "oracle: unfolding does not terminate");
        use BehaviorExpr::*;
        match b {
            Stop => vec![],
            Exit => vec![(EXIT.into(), Stop)],
            Prefix { action, rest, .. } => match action {
                ActionExpr::Internal => vec![("i".into(), (**rest).clone())],
                ActionExpr::Comm { gate, offers } => self.expand(gate, offers, rest),
            },
            Choice(l, r) => {
                let mut v = self.steps_depth(l, depth);
                v.extend(self.steps_depth(r, depth));
                v
            }
            Par { left, sync, right, .. } => {
                let ls = self.steps_depth(left, depth);
                let rs = self.steps_depth(right, depth);
                let synced = |label: &str| {
                    label == EXIT
                        || match sync {
                            SyncSet::None => false,
                            SyncSet::Full => label != "i",
                            SyncSet::Gates(gs) => gs.iter().any(|g| gate_of(label) == Some(g.as_str())),
                        }
                };
                let mut v = Vec::new();
                for (l, l2) in &ls {
                    if !synced(l) {
                        v.push((l.clone(), BehaviorExpr::par(l2.clone(), sync.clone(), (**right).clone())));
                    }
                }
                for (r, r2) in &rs {
                    if !synced(r) {
                        v.push((r.clone(), BehaviorExpr::par((**left).clone(), sync.clone(), r2.clone())));
                    }
                }
                for (l, l2) in &ls {
                    for (r, r2) in &rs {
                        if l == r && synced(l) {
                            v.push((l.clone(), BehaviorExpr::par(l2.clone(), sync.clone(), r2.clone())));
                        }
                    }
                }
                v
            }
            Hide { gates, body, .. } => self
                .steps_depth(body, depth)
                .into_iter()
                .map(|(l, b2)| {
                    let hidden = gate_of(&l).is_some_and(|g| gates.iter().any(|h| h == g));
                    let l = if hidden { "i".to_string() } else { l };
                    (l, BehaviorExpr::Hide { gates: gates.clone(), body: Box::new(b2), loc: Loc::default() })
                })
                .collect(),
            Seq(l, r) => self
                .steps_depth(l, depth)
                .into_iter()
                .map(|(lab, l2)| {
                    if lab == EXIT {
                        ("i".to_string(), (**r).clone())
                    } else {
                        (lab, BehaviorExpr::seq(l2, (**r).clone()))
                    }
                })
                .collect(),
            Disrupt(l, r) => {
                let mut v: Vec<_> = self
                    .steps_depth(l, depth)
                    .into_iter()
                    .map(|(lab, l2)| {
                        if lab == EXIT {
                            (lab, l2)
                        } else {
                            (lab, BehaviorExpr::disrupt(l2, (**r).clone()))
                        }
                    })
                    .collect();
                v.extend(self.steps_depth(r, depth));
                v
            }
            Inst { process, gates, .. } => {
                let def = self.spec.process(process).expect("oracle: unknown process");
                let map: HashMap<&str, &str> = def
                    .formal_gates
                    .iter()
                    .map(String::as_str)
                    .zip(gates.iter().map(String::as_str))
                    .collect();
                let body = rename_gates(&def.body, &map);
                self.steps_depth(&body, depth + 1)
            }
        }
    }

    fn expand(&self, gate: &str, offers: &[OfferExpr], rest: &BehaviorExpr) -> Vec<(String, BehaviorExpr)> {
        let mut partial: Vec<(Vec<String>, BehaviorExpr)> = vec![(vec![], rest.clone())];
        for o in offers {
            let mut next = Vec::new();
            for (vals, cont) in partial {
                match o {
                    OfferExpr::Send(v) => {
                        let ValueExpr::Literal(lit) = v else {
                            panic!("oracle: unbound variable `{}`", v.name());
                        };
                        let mut vals = vals.clone();
                        vals.push(lit.clone());
                        next.push((vals, cont));
                    }
                    OfferExpr::Receive { var, sort } => {
                        let sort = self.spec.sort(sort).expect("oracle: unknown sort");
                        for val in &sort.values {
                            let mut vals = vals.clone();
                            vals.push(val.clone());
                            next.push((vals, bind_var(&cont, var, val)));
                        }
                    }
                }
            }
            partial = next;
        }
        partial
            .into_iter()
            .map(|(vals, cont)| {
                let mut l = gate.to_string();
                for v in vals {
                    l.push_str(" !");
                    l.push_str(&v);
                }
                (l, cont)
            })
            .collect()
    }

    /// Breadth-first closure of the top behavior, states keyed by syntax.
    pub fn explore(&self, max_states: usize) -> Option<OracleLts> {
        let init = self.spec.top_behavior.clone();
        let mut ids: HashMap<BehaviorExpr, usize> = HashMap::from([(init.clone(), 0)]);
        let mut states = vec![init];
        let mut transitions = BTreeSet::new();
        let mut i = 0;
        while i < states.len() {
            for (l, t) in self.steps(&states[i].clone()) {
                let id = match ids.get(&t) {
                    Some(&id) => id,
                    None => {
                        if states.len() == max_states {
                            return None;
                        }
                        ids.insert(t.clone(), states.len());
                        states.push(t);
                        states.len() - 1
                    }
                };
                transitions.insert((i, l, id));
            }
            i += 1;
        }
        Some(OracleLts {
            states,
            transitions: transitions.into_iter().collect(),
        })
    }
}

pub fn gate_of(label: &str) -> Option<&str> {
    if label == "i" || label == EXIT {
        None
    } else {
        Some(label.split(" !").next().unwrap())
    }
}

/// Substitutes literal `val` for variable `var` up to any receive that
/// rebinds it.
fn bind_var(b: &BehaviorExpr, var: &str, val: &str) -> BehaviorExpr {
    use BehaviorExpr::*;
    match b {
        Stop | Exit | Inst { .. } => b.clone(),
        Prefix { action, rest, loc } => {
            let mut rebinds = false;
            let action = match action {
                ActionExpr::Internal => ActionExpr::Internal,
                ActionExpr::Comm { gate, offers } => ActionExpr::Comm {
                    gate: gate.clone(),
                    offers: offers
                        .iter()
                        .map(|o| match o {
                            OfferExpr::Send(ValueExpr::Var(x)) if x == var && !rebinds => {
                                OfferExpr::Send(ValueExpr::Literal(val.to_string()))
                            }
                            OfferExpr::Receive { var: x, .. } => {
                                rebinds |= x == var;
                                o.clone()
                            }
                            _ => o.clone(),
                        })
                        .collect(),
                },
            };
            let rest = if rebinds { (**rest).clone() } else { bind_var(rest, var, val) };
            Prefix { action, rest: Box::new(rest), loc: *loc }
        }
        Choice(l, r) => BehaviorExpr::choice(bind_var(l, var, val), bind_var(r, var, val)),
        Par { left, sync, right, .. } => {
            BehaviorExpr::par(bind_var(left, var, val), sync.clone(), bind_var(right, var, val))
        }
        Hide { gates, body, .. } => Hide {
            gates: gates.clone(),
            body: Box::new(bind_var(body, var, val)),
            loc: Loc::default(),
        },
        Seq(l, r) => BehaviorExpr::seq(bind_var(l, var, val), bind_var(r, var, val)),
        Disrupt(l, r) => BehaviorExpr::disrupt(bind_var(l, var, val), bind_var(r, var, val)),
    }
}

/// Capture-avoiding gate renaming. A hidden gate that collides with an
/// incoming actual is renamed by priming it.
fn rename_gates(b: &BehaviorExpr, map: &HashMap<&str, &str>) -> BehaviorExpr {
    use BehaviorExpr::*;
    let g = |x: &String| map.get(x.as_str()).map_or_else(|| x.clone(), |s| s.to_string());
    match b {
        Stop | Exit => b.clone(),
        Prefix { action, rest, loc } => Prefix {
            action: match action {
                ActionExpr::Internal => ActionExpr::Internal,
                ActionExpr::Comm { gate, offers } => ActionExpr::Comm { gate: g(gate), offers: offers.clone() },
            },
            rest: Box::new(rename_gates(rest, map)),
            loc: *loc,
        },
        Choice(l, r) => BehaviorExpr::choice(rename_gates(l, map), rename_gates(r, map)),
        Par { left, sync, right, .. } => {
            let sync = match sync {
                SyncSet::Gates(gs) => SyncSet::Gates(gs.iter().map(g).collect()),
                s => s.clone(),
            };
            BehaviorExpr::par(rename_gates(left, map), sync, rename_gates(right, map))
        }
        Hide { gates, body, .. } => {
            let targets: BTreeSet<&str> = map.values().copied().collect();
            let mut inner: HashMap<&str, &str> =
                map.iter().filter(|(k, _)| !gates.iter().any(|h| h == *k)).map(|(k, v)| (*k, *v)).collect();
            let mut fresh: Vec<(String, String)> = Vec::new();
            for h in gates {
                if targets.contains(h.as_str()) {
                    let mut n = format!("{h}'");
                    while targets.contains(n.as_str()) {
                        n.push('\'');
                    }
                    fresh.push((h.clone(), n));
                }
            }
            for (h, n) in &fresh {
                inner.insert(h.as_str(), n.as_str());
            }
            let new_gates = gates
                .iter()
                .map(|h| fresh.iter().find(|(x, _)| x == h).map_or_else(|| h.clone(), |(_, n)| n.clone()))
                .collect();
            Hide { gates: new_gates, body: Box::new(rename_gates(body, &inner)), loc: Loc::default() }
        }
        Seq(l, r) => BehaviorExpr::seq(rename_gates(l, map), rename_gates(r, map)),
        Disrupt(l, r) => BehaviorExpr::disrupt(rename_gates(l, map), rename_gates(r, map)),
        Inst { process, gates, loc } => Inst { process: process.clone(), gates: gates.iter().map(g).collect(), loc: *loc },
    }
}

// ---------------------------------------------------------------------------
// Random behaviors
// ---------------------------------------------------------------------------

pub const GATES: [&str; 3] = ["a", "b", "c"];

/// A process-free specification over gates `a, b, c` and sort `S = {x, y}`.
pub fn spec_of(b: BehaviorExpr) -> Specification {
    Specification {
        name: "R".into(),
        top_gates: GATES.iter().map(|g| g.to_string()).collect(),
        functionality: Functionality::Exit,
        sorts: vec![SortDecl {
            name: "S".into(),
            values: vec!["x".into(), "y".into()],
            loc: Loc::default(),
        }],
        processes: vec![],
        top_behavior: b,
        loc: Loc::default(),
    }
}

fn gate() -> impl Strategy<Value = String> {
    prop::sample::select(GATES.to_vec()).prop_map(str::to_string)
}

fn gate_set() -> impl Strategy<Value = Vec<String>> {
    prop::sample::subsequence(GATES.to_vec(), 1..=3).prop_map(|v| v.into_iter().map(str::to_string).collect())
}

fn action() -> impl Strategy<Value = ActionExpr> {
    prop_oneof![
        2 => Just(ActionExpr::Internal),
        5 => gate().prop_map(|g| ActionExpr::Comm { gate: g, offers: vec![] }),
        2 => (gate(), prop::sample::select(vec!["x", "y"])).prop_map(|(g, v)| ActionExpr::Comm {
            gate: g,
            offers: vec![OfferExpr::Send(ValueExpr::Literal(v.into()))],
        }),
        1 => gate().prop_map(|g| ActionExpr::Comm {
            gate: g,
            offers: vec![OfferExpr::Receive { var: "v".into(), sort: "S".into() }],
        }),
    ]
}

fn sync() -> impl Strategy<Value = SyncSet> {
    prop_oneof![Just(SyncSet::None), Just(SyncSet::Full), gate_set().prop_map(SyncSet::Gates)]
}

/// Random behavior expressions of depth at most `depth`.
pub fn behavior(depth: u32) -> BoxedStrategy<BehaviorExpr> {
    let leaf = prop_oneof![Just(BehaviorExpr::Stop), Just(BehaviorExpr::Exit)];
    if depth == 0 {
        return leaf.boxed();
    }
    let sub = behavior(depth - 1);
    prop_oneof![
        1 => leaf,
        4 => (action(), sub.clone()).prop_map(|(a, b)| BehaviorExpr::prefix(a, b)),
        2 => (sub.clone(), sub.clone()).prop_map(|(l, r)| BehaviorExpr::choice(l, r)),
        2 => (sub.clone(), sync(), sub.clone()).prop_map(|(l, s, r)| BehaviorExpr::par(l, s, r)),
        1 => (gate_set(), sub.clone()).prop_map(|(g, b)| BehaviorExpr::Hide { gates: g, body: Box::new(b), loc: Loc::default() }),
        1 => (sub.clone(), sub.clone()).prop_map(|(l, r)| BehaviorExpr::seq(l, r)),
        1 => (sub.clone(), sub).prop_map(|(l, r)| BehaviorExpr::disrupt(l, r)),
    ]
    .boxed()
}

/// `g1; g2; ...; gn; stop` with gates `<prefix>1 .. <prefix>n`.
pub fn chain(prefix: &str, n: usize) -> BehaviorExpr {
    (1..=n).rev().fold(BehaviorExpr::Stop, |b, i| BehaviorExpr::gate(&format!("{prefix}{i}"), b))
}

// ---------------------------------------------------------------------------
// Query oracle
// ---------------------------------------------------------------------------

/// Enumerates every assignment of the query's variables over the base's
/// universe in lexicographic order (variables ordered by first occurrence,
/// then unused quantified ones) and returns the first that satisfies all
/// conjuncts, listed in quantifier order.
pub fn brute_force_query(base: &FactBase, q: &Query) -> Option<Vec<(String, String)>> {
    let mut order: Vec<String> = Vec::new();
    for a in &q.conjuncts {
        for t in &a.args {
            if let Term::Var(v) = t {
                if !order.contains(v) {
                    order.push(v.clone());
                }
            }
        }
    }
    for v in &q.exists_vars {
        if !order.contains(v) {
            order.push(v.clone());
        }
    }
    let universe: Vec<String> = base
        .iter()
        .flat_map(|f| f.args.clone())
        .collect::<BTreeSet<_>>()
        .into_iter()
        .collect();
    let n = order.len();
    if n > 0 && universe.is_empty() {
        return None;
    }
    let mut idx = vec![0usize; n];
    loop {
        let env: HashMap<&str, &str> = order
            .iter()
            .zip(&idx)
            .map(|(v, &i)| (v.as_str(), universe[i].as_str()))
            .collect();
        let ok = q.conjuncts.iter().all(|a| {
            let args: Vec<String> = a
                .args
                .iter()
                .map(|t| match t {
                    Term::Var(v) => env[v.as_str()].to_string(),
                    Term::Const(c) => c.clone(),
                })
                .collect();
            base.contains(&Fact { predicate: a.predicate, args })
        });
        if ok {
            return Some(q.exists_vars.iter().map(|v| (v.clone(), env[v.as_str()].to_string())).collect());
        }
        // Odometer increment, last variable fastest.
        let mut k = n;
        loop {
            if k == 0 {
                return None;
            }
            k -= 1;
            idx[k] += 1;
            if idx[k] < universe.len() {
                break;
            }
            idx[k] = 0;
        }
    }
}

const PREDICATES: [Predicate; 4] = [Predicate::Class, Predicate::Inherit, Predicate::Associate, Predicate::New];
const CONSTS: [&str; 4] = ["A", "B", "C", "D"];

fn fact() -> impl Strategy<Value = Fact> {
    (prop::sample::select(PREDICATES.to_vec()), prop::collection::vec(prop::sample::select(CONSTS.to_vec()), 3))
        .prop_map(|(p, args)| Fact::new(p, args.into_iter().take(p.arity())).unwrap())
}

pub fn fact_base() -> impl Strategy<Value = FactBase> {
    prop::collection::vec(fact(), 0..=12).prop_map(|v| v.into_iter().collect())
}

fn term() -> impl Strategy<Value = Term> {
    prop_oneof![
        3 => prop::sample::select(vec!["X", "Y", "Z"]).prop_map(|v| Term::Var(v.into())),
        1 => prop::sample::select(CONSTS.to_vec()).prop_map(|c| Term::Const(c.into())),
    ]
}

pub fn query() -> impl Strategy<Value = Query> {
    let atom = (prop::sample::select(PREDICATES.to_vec()), prop::collection::vec(term(), 3))
        .prop_map(|(p, args)| Atom { predicate: p, args: args.into_iter().take(p.arity()).collect() });
    (prop::collection::vec(atom, 0..=4), prop::sample::subsequence(vec!["W"], 0..=1)).prop_map(|(conj, extra)| {
        let mut vars: Vec<String> = Vec::new();
        for a in &conj {
            for t in &a.args {
                if let Term::Var(v) = t {
                    if !vars.contains(v) {
                        vars.push(v.clone());
                    }
                }
            }
        }
        vars.sort();
        vars.extend(extra.into_iter().map(str::to_string));
        Query::new(vars, conj).unwrap()
    })
}

// ---------------------------------------------------------------------------
// Shortest-path oracle over an LTS
// ---------------------------------------------------------------------------

/// Breadth-first distances from the initial state (`None` if unreachable).
pub fn distances(lts: &Lts) -> Vec<Option<usize>> {
    let mut dist = vec![None; lts.num_states()];
    dist[0] = Some(0);
    let mut q = VecDeque::from([0]);
    while let Some(s) = q.pop_front() {
        for t in lts.transitions().iter().filter(|t| t.source == s) {
            if dist[t.target].is_none() {
                dist[t.target] = Some(dist[s].unwrap() + 1);
                q.push_back(t.target);
            }
        }
    }
    dist
}

/// Length of the shortest path to a deadlocked state: no outgoing transition
/// and not reached exclusively through `exit`.
pub fn shortest_deadlock(lts: &Lts) -> Option<usize> {
    let dist = distances(lts);
    (0..lts.num_states())
        .filter(|&s| {
            let out = lts.transitions().iter().any(|t| t.source == s);
            let incoming: Vec<_> = lts.transitions().iter().filter(|t| t.target == s).collect();
            let terminated = !incoming.is_empty() && incoming.iter().all(|t| lts.label_text(t.label) == "exit");
            !out && !terminated
        })
        .filter_map(|s| dist[s])
        .min()
}

/// Length of the shortest path whose last label satisfies `pred`.
pub fn shortest_reach(lts: &Lts, pred: impl Fn(&str) -> bool) -> Option<usize> {
    let dist = distances(lts);
    lts.transitions()
        .iter()
        .filter(|t| pred(lts.label_text(t.label)))
        .filter_map(|t| dist[t.source].map(|d| d + 1))
        .min()
}

/// Whether some path of `lts` from the initial state spells `labels`, and
/// the set of states where such paths end.
pub fn run_trace(lts: &Lts, labels: &[String]) -> BTreeSet<usize> {
    let mut cur = BTreeSet::from([0]);
    for l in labels {
        cur = lts
            .transitions()
            .iter()
            .filter(|t| cur.contains(&t.source) && lts.label_text(t.label) == l)
            .map(|t| t.target)
            .collect();
    }
    cur
}
