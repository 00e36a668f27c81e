mod common;

use std::path::Path;

use common::*;
use lotos_asc::contracts::{
    check_asc, check_interface, eval_query, parse_facts, FactBase, InterfaceContract, MessageDecl, PortDecl,
    QueryResult, Rule,
};
use lotos_asc::syntax::{parse_asc, Code};
use proptest::prelude::*;

proptest! {
    #![proptest_config(ProptestConfig::with_cases(500))]

    #[test]
    fn eval_agrees_with_enumeration(base in fact_base(), q in query()) {
        let expected = brute_force_query(&base, &q);
        match eval_query(&base, &q) {
            QueryResult::Holds(b) => prop_assert_eq!(Some(b), expected),
            QueryResult::Fails => prop_assert_eq!(None, expected),
        }
    }

    #[test]
    fn eval_is_monotone(base in fact_base(), more in fact_base(), q in query()) {
        if eval_query(&base, &q).holds() {
            let bigger: FactBase = base.iter().chain(more.iter()).cloned().collect();
            prop_assert!(eval_query(&bigger, &q).holds());
        }
    }
}

fn port(p: &str, owner: &str) -> PortDecl {
    PortDecl { port: p.into(), process: owner.into() }
}

fn msg(m: &str, p: &str) -> MessageDecl {
    MessageDecl { message: m.into(), port: p.into() }
}

const NAMES: [&str; 4] = ["m1", "m2", "m3", "m4"];
const PORTS: [&str; 3] = ["p1", "p2", "p3"];

fn interface() -> impl Strategy<Value = InterfaceContract> {
    let owner = prop::sample::select(vec!["A", "B", "C"]);
    let ports = prop::collection::vec((prop::sample::select(PORTS.to_vec()), owner), 0..5);
    let msgs = prop::collection::vec((prop::sample::select(NAMES.to_vec()), prop::sample::select(PORTS.to_vec())), 0..5);
    (
        prop::sample::subsequence(vec!["A", "B"], 0..=2),
        ports.clone(),
        ports,
        msgs.clone(),
        msgs,
        prop::sample::subsequence(NAMES.to_vec(), 0..=2),
    )
        .prop_map(|(procs, ip, op, im, om, ext)| InterfaceContract {
            processes: procs.into_iter().map(str::to_string).collect(),
            in_ports: ip.into_iter().map(|(p, o)| port(p, o)).collect(),
            out_ports: op.into_iter().map(|(p, o)| port(p, o)).collect(),
            in_msgs: im.into_iter().map(|(m, p)| msg(m, p)).collect(),
            out_msgs: om.into_iter().map(|(m, p)| msg(m, p)).collect(),
            external_in: ext.into_iter().map(str::to_string).collect(),
            flows: vec![],
        })
}

proptest! {
    #[test]
    fn interface_check_ignores_listing_order(ic in interface(), seed in any::<u64>()) {
        use rand::seq::SliceRandom;
        use rand::SeedableRng;
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
        let mut shuffled = ic.clone();
        shuffled.processes.shuffle(&mut rng);
        shuffled.in_ports.shuffle(&mut rng);
        shuffled.out_ports.shuffle(&mut rng);
        shuffled.in_msgs.shuffle(&mut rng);
        shuffled.out_msgs.shuffle(&mut rng);
        shuffled.external_in.shuffle(&mut rng);
        prop_assert_eq!(check_interface(&ic), check_interface(&ic));
        prop_assert_eq!(check_interface(&ic), check_interface(&shuffled));
    }

    #[test]
    fn removing_sole_emitter_adds_one_c3(ic in interface(), pick in any::<prop::sample::Index>()) {
        let c3 = |ic: &InterfaceContract| check_interface(ic).iter().filter(|v| v.rule == Rule::InputMessageSource).count();
        let candidates: Vec<usize> = (0..ic.out_msgs.len())
            .filter(|&i| {
                let m = &ic.out_msgs[i].message;
                ic.out_msgs.iter().filter(|o| &o.message == m).count() == 1
                    && ic.in_msgs.iter().any(|x| &x.message == m)
                    && !ic.external_in.contains(m)
            })
            .collect();
        prop_assume!(!candidates.is_empty());
        let i = candidates[pick.index(candidates.len())];
        let mut smaller = ic.clone();
        smaller.out_msgs.remove(i);
        prop_assert_eq!(c3(&smaller), c3(&ic) + 1);
    }
}

fn observer_facts() -> FactBase {
    parse_facts(&read_corpus("observer.facts")).unwrap()
}

#[test]
fn observer_contract_passes_with_witness() {
    let asc = parse_asc(&read_corpus("observer.asc")).unwrap();
    let r = check_asc(&asc, &observer_facts(), &corpus(""));
    assert!(r.pass, "{r}");
    assert_eq!(
        r.sc,
        QueryResult::Holds(vec![("s".into(), "Subject".into()), ("o".into(), "Observer".into())])
    );
    assert!(asc.ic.external_in.contains(&"change".to_string()));
}

#[test]
fn observer_mutations_fail_with_expected_codes() {
    let dir = corpus("mutations");
    for (file, code) in [
        ("duplicate_input_port.asc", "C1"),
        ("change_not_external.asc", "C3"),
        ("notify_not_sent.asc", "C3"),
    ] {
        let asc = parse_asc(&std::fs::read_to_string(dir.join(file)).unwrap()).unwrap();
        let r = check_asc(&asc, &observer_facts(), &dir);
        assert!(!r.pass, "{file}");
        assert_eq!(r.failure_codes(), vec![code], "{file}");
    }
    let d = parse_asc(&std::fs::read_to_string(dir.join("misspelled_predicate.asc")).unwrap()).unwrap_err();
    let codes: Vec<Code> = d.iter().filter(|d| d.is_error()).map(|d| d.code).collect();
    assert_eq!(codes, vec![Code::UnknownPredicate]);
}

#[test]
fn structural_contract_fails_without_its_facts() {
    let asc = parse_asc(&read_corpus("observer.asc")).unwrap();
    let partial: FactBase = observer_facts()
        .iter()
        .filter(|f| f.predicate.name() != "associate")
        .cloned()
        .collect();
    let r = check_asc(&asc, &partial, &corpus(""));
    assert!(!r.pass);
    assert_eq!(r.failure_codes(), vec!["sc-fails"]);
    assert!(check_asc(&asc, &FactBase::new(), Path::new("/nonexistent")).failure_codes().contains(&"missing-file".to_string()));
}
