mod common;

use std::collections::BTreeSet;

use permlogic::automata::{compile_regex, nfa_intersect, parikh_intersection_nonempty, threshold_automaton, Nfa, Regex};
use rand::rngs::StdRng;
use rand::RngExt;

fn words(k: usize, max_len: usize) -> Vec<Vec<usize>> {
    let mut out = vec![vec![]];
    let mut frontier = vec![vec![]];
    for _ in 0..max_len {
        frontier = frontier
            .into_iter()
            .flat_map(|w: Vec<usize>| {
                (0..k).map(move |a| {
                    let mut v = w.clone();
                    v.push(a);
                    v
                })
            })
            .collect();
        out.extend(frontier.iter().cloned());
    }
    out
}

fn random_regex(rng: &mut StdRng, al: &[String], depth: usize) -> Regex {
    if depth == 0 || rng.random_bool(0.25) {
        return match rng.random_range(0..5) {
            0 => Regex::Epsilon,
            1 => {
                let mut class: BTreeSet<String> = al.iter().filter(|_| rng.random_bool(0.5)).cloned().collect();
                class.insert(al[rng.random_range(0..al.len())].clone());
                Regex::Class(class)
            }
            _ => Regex::Letter(al[rng.random_range(0..al.len())].clone()),
        };
    }
    let parts = |rng: &mut StdRng| (0..rng.random_range(1..=3)).map(|_| random_regex(rng, al, depth - 1)).collect();
    match rng.random_range(0..4) {
        0 => Regex::Concat(parts(rng)),
        1 => Regex::Union(parts(rng)),
        2 => Regex::Plus(Box::new(random_regex(rng, al, depth - 1))),
        _ => Regex::Star(Box::new(random_regex(rng, al, depth - 1))),
    }
}

/// Whether `r` matches `w`, by trying every split.
fn matches(r: &Regex, al: &[String], w: &[usize]) -> bool {
    let name = |i: usize| &al[i];
    match r {
        Regex::Epsilon => w.is_empty(),
        Regex::Letter(a) => w.len() == 1 && name(w[0]) == a,
        Regex::Class(s) => w.len() == 1 && s.contains(name(w[0])),
        Regex::Concat(rs) => match rs.split_first() {
            None => w.is_empty(),
            Some((head, tail)) => {
                let rest = Regex::Concat(tail.to_vec());
                (0..=w.len()).any(|i| matches(head, al, &w[..i]) && matches(&rest, al, &w[i..]))
            }
        },
        Regex::Union(rs) => rs.iter().any(|r| matches(r, al, w)),
        Regex::Star(r) => w.is_empty() || (1..=w.len()).any(|i| matches(r, al, &w[..i]) && matches(&Regex::Star(r.clone()), al, &w[i..])),
        Regex::Plus(r) => (0..=w.len()).any(|i| matches(r, al, &w[..i]) && matches(&Regex::Star(r.clone()), al, &w[i..])),
    }
}

#[test]
fn regex_compilation_matches_direct_matching() {
    let mut rng = common::rng(51);
    for _ in 0..300 {
        let al = common::alphabet(rng.random_range(1..=3));
        let r = random_regex(&mut rng, &al, 3);
        let a = compile_regex(&r, &al).unwrap();
        for w in words(al.len(), 5) {
            assert_eq!(a.accepts(&w), matches(&r, &al, &w), "{r:?} on {w:?}");
        }
    }
}

#[test]
fn intersection_accepts_exactly_the_common_words() {
    let mut rng = common::rng(53);
    for _ in 0..300 {
        let al = common::alphabet(rng.random_range(1..=3));
        let a = common::random_nfa(&mut rng, &al, 4, 0.3);
        let b = common::random_nfa(&mut rng, &al, 4, 0.3);
        let c = nfa_intersect(&a, &b).unwrap();
        for w in words(al.len(), 6) {
            assert_eq!(c.accepts(&w), a.accepts(&w) && b.accepts(&w));
        }
    }
}

#[test]
fn threshold_automaton_counts_heavy_letters() {
    let mut rng = common::rng(57);
    for _ in 0..300 {
        let k = rng.random_range(1..=3);
        let al = common::alphabet(k);
        let heavy: BTreeSet<usize> = (0..k).filter(|_| rng.random_bool(0.5)).collect();
        let theta = rng.random_range(0..=3);
        let a = threshold_automaton(&al, &heavy, theta).unwrap();
        for w in words(k, 6) {
            let expect = heavy.iter().all(|h| w.iter().filter(|x| *x == h).count() > theta);
            assert_eq!(a.accepts(&w), expect);
        }
    }
}

#[test]
fn common_vectors_survive_larger_caps() {
    let mut rng = common::rng(59);
    for _ in 0..300 {
        let al = common::alphabet(rng.random_range(1..=2));
        let a: Nfa = common::random_nfa(&mut rng, &al, 4, 0.35);
        let b: Nfa = common::random_nfa(&mut rng, &al, 4, 0.35);
        let mut found = false;
        for cap in 1..=6 {
            let now = parikh_intersection_nonempty(&a, &b, cap).unwrap().is_some();
            assert!(now || !found, "witness lost when the cap grew to {cap}");
            found = now;
        }
    }
}
