use std::collections::{HashMap, HashSet};

use proptest::prelude::*;

use netlock::aig::to_aig;
use netlock::key::KeyBits;
use netlock::lock::{distribute_keys, lock_netlist, LockOptions};
use netlock::metrics::{corruption_term, scatter_index};
use netlock::netlist::{emit_bench, parse_bench, random_netlist, topo_order, GateKind, Netlist, RandomCircuit};
use netlock::opt::{eliminate_dead, propagate_constants};
use netlock::partition::{cut_size, partition, random_hypergraph};
use netlock::sim::{equivalence_check, eval_recursive, simulate, Assignment, PatternMode};

fn circuit() -> impl Strategy<Value = Netlist> {
    (2usize..10, 1usize..60, any::<u64>()).prop_map(|(i, g, s)| random_netlist(RandomCircuit::new(i, g), s))
}

fn bits(n: usize, seed: u64) -> Vec<bool> {
    (0..n).map(|i| (seed.rotate_left(i as u32 * 7) ^ (i as u64 * 0x9E37)) & 1 == 1).collect()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn bench_round_trip(n in circuit()) {
        let text = emit_bench(&n);
        let back = parse_bench(&text).unwrap();
        prop_assert_eq!(emit_bench(&back), text);
        prop_assert!(equivalence_check(&n, &back, &[], PatternMode::Exhaustive).unwrap().equivalent());
    }

    #[test]
    fn cones_are_dual(n in circuit()) {
        let fanin: Vec<HashSet<u32>> = n
            .gates()
            .iter()
            .map(|g| n.fanin_cone(g.output).unwrap().into_iter().map(|x| x.0).collect())
            .collect();
        for (a, ga) in n.gates().iter().enumerate() {
            let out: HashSet<u32> = n.fanout_cone(ga.output).unwrap().into_iter().map(|x| x.0).collect();
            for (b, ins) in fanin.iter().enumerate() {
                if a != b {
                    prop_assert_eq!(ins.contains(&(a as u32)), out.contains(&(b as u32)));
                }
            }
        }
    }

    #[test]
    fn word_simulation_matches_recursive(n in circuit(), seed in any::<u64>()) {
        for p in 0..8u64 {
            let a = Assignment::new(bits(n.primary_inputs().len(), seed.wrapping_add(p)), vec![]);
            prop_assert_eq!(simulate(&n, &a).unwrap(), eval_recursive(&n, &a));
        }
    }

    #[test]
    fn partitions_respect_balance(v in 2usize..120, e in 1usize..200, size in 1usize..30, seed in any::<u64>()) {
        let h = random_hypergraph(v, e, 5, seed);
        let ps = partition(&h, size, 0.25, seed).unwrap();
        prop_assert_eq!(ps.assignment.len(), v);
        prop_assert!(ps.sizes().iter().all(|&s| s <= ps.max_size()));
        prop_assert!(ps.assignment.iter().all(|&a| (a as usize) < ps.p));
        prop_assert!(cut_size(&h, &ps).unwrap() <= ps.bisection_cut_refined);
        prop_assert!(ps.bisection_cut_refined <= ps.bisection_cut_initial);
    }

    #[test]
    fn corruption_is_symmetric(x in 0.0f64..=1.0) {
        prop_assert!((corruption_term(x) - corruption_term(1.0 - x)).abs() < 1e-12);
        prop_assert!(corruption_term(x) <= corruption_term(0.5));
        prop_assert!((0.0..=1.0).contains(&corruption_term(x)));
    }

    #[test]
    fn scatter_grows_with_depth(n in circuit(), seed in any::<u64>()) {
        let Ok(locked) = netlock::lock::xor_lock(&n, 1, seed) else { return Ok(()) };
        let mut last = 0.0;
        for d in 0..8 {
            let t = scatter_index(&locked.netlist, d).unwrap().t_index;
            prop_assert!(t >= last);
            last = t;
        }
    }

    #[test]
    fn constant_propagation_preserves_function(n in circuit(), seed in any::<u64>()) {
        let pis = n.primary_inputs().to_vec();
        let values = bits(pis.len(), seed);
        let fixed: HashMap<_, _> = pis.iter().copied().zip(values.iter().copied()).step_by(2).collect();
        let folded = propagate_constants(&n, &fixed).unwrap();
        for p in 0..16u64 {
            let mut a = bits(pis.len(), seed ^ p.wrapping_mul(0x9E37_79B9));
            for (i, pi) in pis.iter().enumerate() {
                if let Some(&v) = fixed.get(pi) {
                    a[i] = v;
                }
            }
            let a = Assignment::new(a, vec![]);
            prop_assert_eq!(simulate(&n, &a).unwrap(), simulate(&folded, &a).unwrap());
        }
    }

    #[test]
    fn dead_logic_elimination_is_idempotent(n in circuit(), seed in any::<u64>()) {
        let fixed = HashMap::from([(n.primary_inputs()[0], seed & 1 == 1)]);
        let once = eliminate_dead(&propagate_constants(&n, &fixed).unwrap()).unwrap();
        let twice = eliminate_dead(&once).unwrap();
        prop_assert_eq!(emit_bench(&once), emit_bench(&twice));
    }

    #[test]
    fn aig_is_equivalent(n in circuit()) {
        let a = to_aig(&n);
        let and_inverter = a.gates().iter().all(|g| match g.kind {
            GateKind::And => g.inputs.len() == 2,
            GateKind::Not => true,
            _ => false,
        });
        prop_assert!(and_inverter);
        prop_assert!(equivalence_check(&n, &a, &[], PatternMode::Exhaustive).unwrap().equivalent());
    }

    #[test]
    fn key_hex_round_trip(v in prop::collection::vec(any::<bool>(), 1..80)) {
        let k = KeyBits(v);
        prop_assert_eq!(KeyBits::from_hex(&k.to_hex(), Some(k.len())).unwrap(), k);
    }

    #[test]
    fn key_distribution_fits_capacities(k in 1usize..64, caps in prop::collection::vec(0usize..8, 1..20)) {
        match distribute_keys(k, &caps) {
            Ok(d) => {
                prop_assert_eq!(d.len(), caps.len());
                prop_assert_eq!(d.iter().sum::<usize>(), k);
                prop_assert!(d.iter().zip(&caps).all(|(x, c)| x <= c));
            }
            Err(_) => prop_assert!(caps.iter().sum::<usize>() < k),
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn locking_is_transparent_and_acyclic(
        inputs in 4usize..12,
        gates in 20usize..150,
        k in 1usize..8,
        seed in any::<u64>(),
    ) {
        let n = random_netlist(RandomCircuit::new(inputs, gates), seed);
        let Ok(r) = lock_netlist(&n, &LockOptions::new(k).seed(seed)) else { return Ok(()) };
        prop_assert!(topo_order(&r.netlist).is_ok());
        prop_assert_eq!(r.netlist.key_inputs().len(), k);
        prop_assert!(equivalence_check(&n, &r.netlist, r.key.bits(), PatternMode::Exhaustive).unwrap().equivalent());
        let reparsed = parse_bench(&emit_bench(&r.netlist)).unwrap();
        prop_assert!(equivalence_check(&n, &reparsed, r.key.bits(), PatternMode::Exhaustive).unwrap().equivalent());
    }
}
