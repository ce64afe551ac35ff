mod common;

use common::*;
use omega::metrics::{
    bleu, evaluate_corpus, lcs_len, load_eval_pairs, meteor, meteor_alignment, render_table, rouge_l, rouge_l_tokens, stem, tokenize,
    EvalPair,
};
use proptest::prelude::*;

#[test]
fn rouge_matches_brute_force_on_every_short_pair() {
    let seqs: Vec<Vec<String>> = all_sequences(&["a", "b", "c"], 4).into_iter().filter(|s| !s.is_empty()).collect();
    for a in &seqs {
        for b in &seqs {
            let lcs = brute_force_lcs(a, b);
            assert_eq!(lcs_len(a, b), lcs, "{a:?} {b:?}");
            let got = rouge_l_tokens(a, b).unwrap();
            assert!((got - rouge_from_lcs(lcs, a.len(), b.len())).abs() < 1e-9);
        }
    }
}

fn short_tokens(max: usize) -> impl Strategy<Value = Vec<String>> {
    prop::collection::vec(prop::sample::select(vec!["a", "b", "c", "d"]).prop_map(String::from), 1..=max)
}

proptest! {
    #[test]
    fn rouge_matches_brute_force_up_to_eight(a in short_tokens(8), b in short_tokens(8)) {
        let lcs = brute_force_lcs(&a, &b);
        prop_assert_eq!(lcs_len(&a, &b), lcs);
        prop_assert!((rouge_l_tokens(&a, &b).unwrap() - rouge_from_lcs(lcs, a.len(), b.len())).abs() < 1e-9);
    }

    #[test]
    fn scores_stay_in_range(c in "[a-e ,.:]{1,40}", r in "[a-e ,.:]{1,40}") {
        prop_assume!(!tokenize(&c).is_empty() && !tokenize(&r).is_empty());
        for s in [bleu(&[&c], &[&r]).unwrap(), rouge_l(&c, &r).unwrap(), meteor(&c, &r).unwrap()] {
            prop_assert!((0.0..=100.0).contains(&s), "{}", s);
        }
    }

    #[test]
    fn corpus_bleu_ignores_pair_order(pairs in prop::collection::vec(("[a-d ]{1,20}", "[a-d ]{1,20}"), 1..6), seed in any::<u64>()) {
        prop_assume!(pairs.iter().all(|(c, r)| !tokenize(c).is_empty() && !tokenize(r).is_empty()));
        let (c, r): (Vec<String>, Vec<String>) = pairs.iter().cloned().unzip();
        let mut order: Vec<usize> = (0..pairs.len()).collect();
        order.rotate_left(seed as usize % pairs.len());
        let c2: Vec<&String> = order.iter().map(|&i| &c[i]).collect();
        let r2: Vec<&String> = order.iter().map(|&i| &r[i]).collect();
        prop_assert!((bleu(&c, &r).unwrap() - bleu(&c2, &r2).unwrap()).abs() < 1e-9);
    }

    #[test]
    fn a_matching_token_never_lowers_rouge_recall(c in short_tokens(8), r in short_tokens(8), pick in any::<prop::sample::Index>()) {
        let extra = r[pick.index(r.len())].clone();
        let mut longer = c.clone();
        longer.push(extra);
        prop_assert!(lcs_len(&longer, &r) >= lcs_len(&c, &r));
    }
}

#[test]
fn bleu_worked_examples() {
    for (cands, refs, expected) in BLEU_WORKED {
        let got = bleu(cands, refs).unwrap();
        assert!((got - expected).abs() < 1e-6, "{cands:?}: {got} vs {expected}");
    }
    let same = ["fix: guard against null", "feat: add the retry loop"];
    assert!((bleu(&same, &same).unwrap() - 100.0).abs() < 1e-9);
    assert!(bleu(&["alpha beta gamma"], &["one two three"]).unwrap() < 1.0);
}

#[test]
fn the_the_the_clips_to_one_unigram() {
    // Modified precision: "the" occurs once in the reference.
    let c = tokenize("the the the");
    let r = tokenize("the cat sat");
    let clipped = c.iter().filter(|t| *t == "the").count().min(r.iter().filter(|t| *t == "the").count());
    assert_eq!(clipped, 1);
    let unigram = clipped as f64 / c.len() as f64;
    let bigram = 1.0 / (2.0 * 2.0);
    let trigram = 1.0 / (2.0 * 1.0);
    let expected = 100.0 * (unigram * bigram * trigram).powf(1.0 / 3.0);
    assert!((bleu(&["the the the"], &["the cat sat"]).unwrap() - expected).abs() < 1e-9);
}

#[test]
fn rouge_worked_example() {
    let got = rouge_l("a b c d", "a c d").unwrap();
    assert!((got - 85.71).abs() < 0.005, "{got}");
    assert_eq!(rouge_l("a b", "c d").unwrap(), 0.0);
    assert_eq!(rouge_l("a b", "a b").unwrap(), 100.0);
}

#[test]
fn meteor_identity_and_stems() {
    let m3 = meteor("a b c", "a b c").unwrap();
    assert!((m3 - 100.0 * (1.0 - 0.5 / 27.0)).abs() < 1e-9);
    assert!((m3 - 98.15).abs() < 0.01);
    assert_eq!(meteor("alpha beta", "gamma delta").unwrap(), 0.0);

    assert_eq!(stem("fixes"), stem("fixed"));
    let a = meteor_alignment(&tokenize("fixes bug"), &tokenize("fixed bug"));
    assert_eq!(a, vec![(0, 0), (1, 1)]);
    // Two matches in one chunk: penalty 0.5 * (1/2)^3.
    assert!((meteor("fixes bug", "fixed bug").unwrap() - 93.75).abs() < 1e-9);
}

#[test]
fn bundled_fixture_reproduces_oracle_scores() {
    let pairs = load_eval_pairs(&data("eval/pairs.jsonl")).unwrap();
    assert_eq!(pairs.len(), 10);
    let expected: serde_json::Value = serde_json::from_str(&read(&data("eval/expected_scores.json"))).unwrap();
    let report = evaluate_corpus(&pairs);
    for (name, col) in [("reference_omg", &report.reference_omg), ("reference_human", &report.reference_human)] {
        let col = col.as_ref().unwrap();
        let e = &expected[name];
        for (metric, got) in [("bleu", col.scores.bleu), ("meteor", col.scores.meteor), ("rouge_l", col.scores.rouge_l)] {
            let want = e[metric].as_f64().unwrap();
            assert!((got - want).abs() < 1e-6, "{name}.{metric}: {got} vs {want}");
        }
        assert_eq!(col.pairs as u64, e["pairs"].as_u64().unwrap());
        assert_eq!(col.skipped as u64, e["skipped"].as_u64().unwrap());
    }
}

#[test]
fn missing_column_is_reported_absent() {
    let pairs = vec![EvalPair {
        commit_id: "x".into(),
        candidate: "fix: a".into(),
        reference_omg: Some("fix: a".into()),
        reference_human: None,
    }];
    let report = evaluate_corpus(&pairs);
    assert!(report.reference_human.is_none());
    let omg = report.reference_omg.unwrap().scores;
    // "fix", ":", "a": three matches in one chunk.
    assert_eq!((omg.bleu, omg.rouge_l), (100.0, 100.0));
    assert!((omg.meteor - 100.0 * (1.0 - 0.5 / 27.0)).abs() < 1e-9);
    let table = render_table(&[("one".into(), evaluate_corpus(&pairs))]);
    assert!(table.contains("one"));
}
