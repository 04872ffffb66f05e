use std::collections::{HashMap, HashSet};

use proptest::prelude::*;

use super::*;

/// Independent word-problem oracle: the exact matrix of an element in the
/// geometric representation, built straight from the bilinear form.
fn matrix_of(form: &BilinearForm, word: &[u8]) -> Vec<Vec<QuadExtScalar>> {
    (0..form.rank())
        .map(|j| {
            let mut col = form.simple_root(j);
            form.apply_word(word, &mut col);
            col
        })
        .collect()
}

/// Brute-force BFS over words, identifying elements by their matrices.
/// Returns, per element, its length and every reduced word.
fn brute_force(system: &CoxeterSystem, max_len: usize) -> HashMap<Vec<Vec<QuadExtScalar>>, (usize, Vec<Vec<u8>>)> {
    let form = system.form();
    let mut table: HashMap<Vec<Vec<QuadExtScalar>>, (usize, Vec<Vec<u8>>)> = HashMap::new();
    table.insert(matrix_of(form, &[]), (0, vec![vec![]]));
    let mut layer: Vec<Vec<u8>> = vec![vec![]];
    for len in 1..=max_len {
        let mut next = Vec::new();
        for w in &layer {
            for g in 0..system.rank() as u8 {
                let mut v = w.clone();
                v.push(g);
                let key = matrix_of(form, &v);
                let entry = table.entry(key).or_insert((len, Vec::new()));
                if entry.0 == len {
                    entry.1.push(v.clone());
                    next.push(v);
                }
            }
        }
        layer = next;
    }
    table
}

/// Lex-least reduced word by the exact greedy descent rule: repeatedly strip
/// the smallest left descent, detected by the sign of `x^{-1} a_t`.
fn greedy_normal_form(system: &CoxeterSystem, word: &[u8]) -> Vec<u8> {
    let form = system.form();
    let mut x: Vec<u8> = word.to_vec();
    let mut out = Vec::new();
    loop {
        let descent = (0..system.rank() as u8).find(|&t| {
            let mut v = form.simple_root(t as usize);
            // x^{-1} a_t: letters of x act first-to-last
            for &g in &x {
                form.reflect(g as usize, &mut v);
            }
            form::is_negative_vector(&v)
        });
        match descent {
            Some(t) => {
                out.push(t);
                x.insert(0, t);
            }
            None => return out,
        }
    }
}

fn sys(name: &str) -> CoxeterSystem {
    CoxeterSystem::named(name).unwrap()
}

#[test]
fn finite_groups_have_expected_orders() {
    for (name, order) in [("A1", 2u128), ("A2", 6), ("B2", 8), ("G2", 12), ("A3", 24), ("B3", 48)] {
        let s = sys(name);
        assert!(s.is_finite(), "{name}");
        let total: u128 = s.automaton().count_by_length(30).iter().sum();
        assert_eq!(total, order, "{name}");
    }
}

#[test]
fn shortlex_language_matches_brute_force_on_finite_groups() {
    for name in ["A2", "B2", "A3", "G2"] {
        let s = sys(name);
        let bf = brute_force(&s, 12);
        let mut expected: Vec<Vec<u8>> = bf.values().map(|(_, ws)| ws.iter().min().unwrap().clone()).collect();
        expected.sort();
        let mut accepted = s.automaton().words_up_to(12);
        accepted.sort();
        assert_eq!(accepted, expected, "{name}");
    }
}

#[test]
fn reduced_word_automaton_matches_brute_force() {
    for name in ["A2", "B2", "A3", "affine-A2", "triangle-3-3-4"] {
        let s = sys(name);
        let a = build_automaton_of_kind(s.small_roots(), AutomatonKind::ReducedWords);
        let bf = brute_force(&s, 6);
        let mut expected: Vec<Vec<u8>> = bf.values().flat_map(|(_, ws)| ws.clone()).collect();
        expected.sort();
        let mut accepted = a.words_up_to(6);
        accepted.sort();
        assert_eq!(accepted, expected, "{name}");
    }
}

#[test]
fn a2_automaton_counts() {
    let s = sys("A2");
    assert_eq!(s.automaton().words_up_to(10).len(), 6);
    assert_eq!(s.automaton().words_up_to(10).iter().map(Vec::len).max(), Some(3));
}

#[test]
fn infinite_dihedral_has_two_words_per_length() {
    let counts = sys("infinite-dihedral").automaton().count_by_length(12);
    assert_eq!(counts[0], 1);
    assert!(counts[1..].iter().all(|&c| c == 2));
}

#[test]
fn affine_a2_has_six_words_of_length_two() {
    let s = sys("affine-A2");
    assert_eq!(s.automaton().count_by_length(2)[2], 6);
    // brute-force: distinct products of two generators
    let bf = brute_force(&s, 2);
    assert_eq!(bf.values().filter(|(l, _)| *l == 2).count(), 6);
}

#[test]
fn growth_matches_bfs_over_multiply() {
    for name in ["affine-A2", "pentagon", "triangle-3-3-4"] {
        let s = sys(name);
        let counts = s.automaton().count_by_length(10);
        let mut seen: HashSet<Element> = HashSet::from([Element::identity()]);
        let mut layer = vec![Element::identity()];
        for k in 1..=10 {
            let mut next = Vec::new();
            for w in &layer {
                for g in 0..s.rank() as u8 {
                    let v = s.right_mul_gen(w, g);
                    if seen.insert(v.clone()) {
                        next.push(v);
                    }
                }
            }
            assert_eq!(next.len() as u128, counts[k], "{name} length {k}");
            assert!(next.iter().all(|v| v.length() == k));
            layer = next;
        }
    }
}

#[test]
fn normal_forms_agree_with_exact_greedy_and_brute_force() {
    for name in ["A3", "affine-A2", "pentagon", "triangle-3-3-4", "affine-C2", "affine-G2"] {
        let s = sys(name);
        let bf = brute_force(&s, 5);
        for (len, words) in bf.values() {
            let least = words.iter().min().unwrap();
            for w in words {
                assert_eq!(s.normal_form(w).word(), least.as_slice(), "{name}");
                assert_eq!(s.normal_form(w).length(), *len);
            }
            assert_eq!(greedy_normal_form(&s, least), *least);
        }
    }
}

#[test]
fn normal_form_examples() {
    let a2 = sys("A2");
    assert!(a2.normal_form(&[0, 0]).is_identity());
    assert_eq!(a2.normal_form(&[1, 0, 1]).word(), &[0, 1, 0]);
    let d = sys("infinite-dihedral");
    assert!(d.normal_form(&[0, 1, 1, 0]).is_identity());
}

#[test]
fn multiply_examples() {
    let a2 = sys("A2");
    let v = a2.normal_form(&[1, 0]);
    assert_eq!(a2.multiply(&Element::identity(), &v), v);
    let s1 = a2.generator(0);
    assert!(a2.multiply(&s1, &s1).is_identity());
    let p = a2.multiply(&s1, &v);
    assert_eq!(p.length(), 3);
    assert_eq!(p.word(), &[0, 1, 0]);
}

#[test]
fn left_descent_examples() {
    let a2 = sys("A2");
    assert!(a2.left_descents(&Element::identity()).is_empty());
    assert_eq!(a2.left_descents(&a2.normal_form(&[1, 0])), vec![1]);
    assert_eq!(a2.left_descents(&a2.normal_form(&[0, 1, 0])), vec![0, 1]);
}

#[test]
fn descents_agree_with_lengths() {
    for name in ["affine-A2", "triangle-3-3-4", "pentagon", "B3"] {
        let s = sys(name);
        for w in s.elements_up_to(5) {
            for g in 0..s.rank() as u8 {
                let shorter = s.left_mul_gen(g, &w).length() < w.length();
                assert_eq!(s.is_left_descent(&w, g), shorter);
                let rshort = s.right_mul_gen(&w, g).length() < w.length();
                assert_eq!(s.right_descents(&w).contains(&g), rshort);
            }
        }
    }
}

#[test]
fn infinite_systems_are_detected() {
    for name in ["infinite-dihedral", "affine-A2", "pentagon", "triangle-3-3-4"] {
        assert!(!sys(name).is_finite(), "{name}");
        assert!(sys(name).automaton().accepts_longer_than(50));
    }
    assert!(!sys("A3").automaton().accepts_longer_than(6));
    assert!(sys("A3").automaton().accepts_longer_than(5));
}

fn word_strategy(rank: u8, max: usize) -> impl Strategy<Value = Vec<u8>> {
    proptest::collection::vec(0..rank, 0..max)
}

proptest! {
    #[test]
    fn normal_form_is_idempotent_and_short(w in word_strategy(3, 24)) {
        let s = sys("triangle-3-3-4");
        let nf = s.normal_form(&w);
        prop_assert!(nf.length() <= w.len());
        prop_assert_eq!(s.normal_form(nf.word()), nf.clone());
        prop_assert!(s.automaton().accepts(nf.word()));
    }

    #[test]
    fn multiply_parity_and_subadditivity(u in word_strategy(5, 16), v in word_strategy(5, 16)) {
        let s = sys("pentagon");
        let (u, v) = (s.normal_form(&u), s.normal_form(&v));
        let p = s.multiply(&u, &v);
        prop_assert!(p.length() <= u.length() + v.length());
        prop_assert_eq!(p.length() % 2, (u.length() + v.length()) % 2);
        // associativity and inverses
        let back = s.multiply(&p, &s.inverse(&v));
        prop_assert_eq!(back, u);
    }

    #[test]
    fn fast_normal_form_matches_exact_greedy(w in word_strategy(3, 14)) {
        let s = sys("affine-G2");
        let fast = s.normal_form(&w).word().to_vec();
        prop_assert_eq!(fast, greedy_normal_form(&s, &w));
    }
}
