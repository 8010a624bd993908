use chordal_td::field::CoefficientField;
use chordal_td::polygraph::{associated_graph, is_subgraph, system_graph};
use chordal_td::reduction::{PivotStrategy, PremChain, SupportPreserving};
use chordal_td::verify::{check_decomposition, check_reduction_chain, check_tree_chordality, random_chordal_system};
use chordal_td::wang::{decompose, DecomposeOptions};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn strategies(len: usize, rng: &mut ChaCha8Rng) -> [PivotStrategy; 4] {
    [
        PivotStrategy::First,
        PivotStrategy::MinTerms,
        PivotStrategy::MinSupport,
        PivotStrategy::Index(rng.gen_range(1..=len.max(1))),
    ]
}

#[test]
fn decompositions_over_small_fields() {
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let mut nodes = 0;
    for seed in 0..220u64 {
        let p = if seed % 2 == 0 { 3 } else { 5 };
        let n = 2 + (seed % 3) as usize;
        let s = random_chordal_system(n, 3, 3, CoefficientField::Prime(p), seed).unwrap();
        let gf = system_graph(&s, false);
        for strategy in strategies(s.polys.len(), &mut rng) {
            let tree = decompose(&s, strategy, DecomposeOptions::default()).unwrap();
            let zeros = check_decomposition(&s, &tree).unwrap();
            assert!(zeros.passed(), "seed {seed} {strategy}: {:?}", zeros.checks);
            let chords = check_tree_chordality(&s, &tree);
            assert!(chords.checks[0].pass, "premise for seed {seed}");
            assert!(chords.passed(), "seed {seed} {strategy}: {:?}", chords.failures().collect::<Vec<_>>());
            for node in &tree.nodes {
                assert!(is_subgraph(&associated_graph(&node.p, false), &gf).is_ok());
            }
            nodes += tree.nodes.len();
        }
    }
    assert!(nodes > 880);
}

#[test]
fn early_prune_does_not_change_outputs() {
    for seed in 0..60u64 {
        let s = random_chordal_system(4, 3, 3, CoefficientField::Prime(3), seed).unwrap();
        let a = decompose(&s, PivotStrategy::MinTerms, DecomposeOptions { early_prune: true }).unwrap();
        let b = decompose(&s, PivotStrategy::MinTerms, DecomposeOptions { early_prune: false }).unwrap();
        assert!(check_decomposition(&s, &b).unwrap().passed());
        let sys = |t: &chordal_td::DecompTree| t.outputs.iter().map(|o| o.system.clone()).collect::<Vec<_>>();
        assert_eq!(sys(&a), sys(&b));
    }
}

#[test]
fn reduction_chains_over_the_rationals() {
    for seed in 0..220u64 {
        let n = 2 + (seed % 4) as usize;
        let s = random_chordal_system(n, 3, 3, CoefficientField::Rationals, seed).unwrap();
        for map in [PremChain::default(), PremChain::new(PivotStrategy::MinTerms)] {
            let report = check_reduction_chain(&s, &map).unwrap();
            assert!(report.checks[0].pass);
            assert!(report.passed(), "seed {seed}: {:?}", report.failures().collect::<Vec<_>>());
        }
        let report = check_reduction_chain(&s, &SupportPreserving).unwrap();
        assert!(report.passed(), "seed {seed}: {:?}", report.failures().collect::<Vec<_>>());
    }
}

#[test]
fn deleting_any_emitted_system_is_detected() {
    let mut instances = 0;
    let mut seed = 0u64;
    while instances < 20 {
        seed += 1;
        let s = random_chordal_system(3, 2, 3, CoefficientField::Prime(5), seed).unwrap();
        let tree = decompose(&s, PivotStrategy::MinTerms, DecomposeOptions::default()).unwrap();
        let nonempty: Vec<usize> = (0..tree.outputs.len())
            .filter(|&k| {
                let o = &tree.outputs[k].system;
                !chordal_td::verify::zero_set_of(&o.t, &o.u, 3, 5).unwrap().points.is_empty()
            })
            .collect();
        if tree.outputs.len() < 2 || nonempty.is_empty() {
            continue;
        }
        instances += 1;
        for k in nonempty {
            let mut mutated = tree.clone();
            mutated.outputs.remove(k);
            let report = check_decomposition(&s, &mutated).unwrap();
            assert!(!report.passed(), "seed {seed}, removed {k}");
            assert!(report.checks[0].witness.is_some());
        }
    }
}
