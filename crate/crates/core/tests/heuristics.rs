mod common;

use pds_core::exact::{exact_pds, ExactConfig};
use pds_core::generators::random_connected_graph;
use pds_core::graph::{NodeSet, UndirectedGraph};
use pds_core::heuristics::{cleanup, greedy, greedy_run, partition_approx, proximity_greedy, proximity_run, TieBreak};
use pds_core::propagation::is_feasible;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const MODES: [TieBreak; 3] = [TieBreak::Lexicographic, TieBreak::AdversarialCenterFirst, TieBreak::SeededRandom(4)];

#[test]
fn all_heuristics_are_feasible() {
    let mut rng = ChaCha8Rng::seed_from_u64(99);
    for i in 0..500 {
        let n = rng.gen_range(2..30);
        let g = random_connected_graph(n, 0.1, &mut rng);
        let mode = MODES[i % 3];
        let gs = greedy(&g, mode);
        assert!(is_feasible(&g, &gs));
        assert!(is_feasible(&g, &proximity_greedy(&g, mode)));
        let order: Vec<usize> = gs.iter().collect();
        let c = cleanup(&g, &gs, &order).unwrap();
        assert!(is_feasible(&g, &c));
        for v in c.iter() {
            let mut less = c.clone();
            less.remove(v);
            assert!(!is_feasible(&g, &less), "cleanup output not minimal");
        }
        let p = partition_approx(&g).unwrap();
        assert!(is_feasible(&g, &p.solution));
        assert_eq!(p.candidates_examined, 1 << p.blocks.len());
    }
}

#[test]
fn gains_positive_and_sum_to_n() {
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    for _ in 0..100 {
        let g = random_connected_graph(20, 0.12, &mut rng);
        for run in [greedy_run(&g, TieBreak::Lexicographic), proximity_run(&g, TieBreak::Lexicographic)] {
            assert!(run.gains.iter().all(|&x| x >= 1));
            assert_eq!(run.gains.iter().sum::<usize>(), 20);
        }
    }
}

#[test]
fn oracle_is_a_lower_bound() {
    let mut rng = ChaCha8Rng::seed_from_u64(21);
    for _ in 0..60 {
        let g = random_connected_graph(rng.gen_range(2..13), 0.2, &mut rng);
        let opt = exact_pds(&g, ExactConfig::default()).unwrap().opt_size;
        assert!(opt <= greedy(&g, TieBreak::Lexicographic).len());
        assert!(opt <= proximity_greedy(&g, TieBreak::Lexicographic).len());
        assert!(opt <= partition_approx(&g).unwrap().solution.len());
    }
    let star = UndirectedGraph::from_edges(6, (1..6).map(|i| (0, i))).unwrap();
    assert_eq!(greedy(&star, TieBreak::Lexicographic).len(), 1);
    assert_eq!(exact_pds(&star, ExactConfig::default()).unwrap().opt_size, 1);
}

#[test]
fn seeded_runs_repeat() {
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    let g = random_connected_graph(40, 0.08, &mut rng);
    for mode in MODES {
        assert_eq!(greedy_run(&g, mode), greedy_run(&g, mode));
        assert_eq!(proximity_run(&g, mode), proximity_run(&g, mode));
    }
    let a: Vec<_> = (0..10).map(|s| greedy_run(&g, TieBreak::SeededRandom(s)).picks).collect();
    assert!(a.iter().any(|p| p != &a[0]), "seeds never change the tie-break");
}

#[test]
fn cleanup_rejects_infeasible_input() {
    let g = UndirectedGraph::empty(2);
    assert!(cleanup(&g, &NodeSet::from_nodes(2, [0]), &[0]).is_err());
}
