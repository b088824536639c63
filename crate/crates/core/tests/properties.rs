use proptest::prelude::*;

use qdistill::circuits::random_input_circuit;
use qdistill::distiller::{mcts_policy, ActionSpace, MctsConfig, PolicyValue};
use qdistill::metrics::{bhattacharyya, gate_fidelity, Target};
use qdistill::neuralnet::{encode_state, DualNet, NetConfig};
use qdistill::qsim::{
    measure_dist, run_circuit, sample, unitary_of, Circuit, Gate, ProbDist, StateVector,
};
use qdistill::Result;

fn gate(n: usize) -> impl Strategy<Value = Gate> {
    let q = 0..n;
    let pair = (0..n, 0..n - 1).prop_map(|(a, b)| (a, if b >= a { b + 1 } else { b }));
    prop_oneof![
        q.clone().prop_map(Gate::Hadamard),
        q.clone().prop_map(Gate::Not),
        (q, -7.0..7.0f64).prop_map(|(qubit, angle)| Gate::PhaseShift { qubit, angle }),
        pair.clone().prop_map(|(control, target)| Gate::CNot { control, target }),
        pair.clone().prop_map(|(a, b)| Gate::Swap(a, b)),
        (pair, -7.0..7.0f64).prop_map(|((control, target), angle)| Gate::ControlledPhase {
            control,
            target,
            angle
        }),
    ]
}

fn circuit() -> impl Strategy<Value = Circuit> {
    (2usize..=4).prop_flat_map(|n| {
        prop::collection::vec(gate(n), 0..16).prop_map(move |g| Circuit::from_gates(n, g).unwrap())
    })
}

fn dist(n: usize) -> impl Strategy<Value = ProbDist> {
    prop::collection::vec(0.0..1.0f64, 1usize << n).prop_map(move |w| {
        let s: f64 = w.iter().sum();
        if s == 0.0 {
            ProbDist::delta(n, 0)
        } else {
            ProbDist::new(n, w.iter().map(|x| x / s).collect()).unwrap()
        }
    })
}

struct Uniform(usize);

impl PolicyValue for Uniform {
    fn predict(&self, _state: &[u16]) -> Result<(Vec<f64>, f64)> {
        Ok((vec![-(self.0 as f64).ln(); self.0], 0.0))
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn gates_preserve_norm(c in circuit(), seed in any::<u64>()) {
        let psi = StateVector::from_amps(
            run_circuit(&random_input_circuit(c.n(), 8, seed).unwrap(), &StateVector::zero(c.n()))
                .unwrap()
                .amps()
                .to_vec(),
        )
        .unwrap();
        let out = run_circuit(&c, &psi).unwrap();
        prop_assert!((out.norm_sqr() - 1.0).abs() < 1e-9);
        let p = measure_dist(&out);
        prop_assert!((p.probs().iter().sum::<f64>() - 1.0).abs() < 1e-9);
    }

    #[test]
    fn circuits_are_unitary(c in circuit()) {
        prop_assert!(unitary_of(&c).unwrap().unitarity_error() < 1e-9);
    }

    #[test]
    fn composition_matches_sequential_runs(a in circuit(), extra in prop::collection::vec(0usize..6, 0..8)) {
        let n = a.n();
        let space = ActionSpace::new(n).unwrap();
        let b = space.circuit(&extra.iter().map(|x| x % space.len()).collect::<Vec<_>>()).unwrap();
        let psi = StateVector::basis(n, (1usize << n) - 1);
        let joint = run_circuit(&a.concat(&b).unwrap(), &psi).unwrap();
        let seq = run_circuit(&b, &run_circuit(&a, &psi).unwrap()).unwrap();
        for (x, y) in joint.amps().iter().zip(seq.amps()) {
            prop_assert!((x - y).norm() < 1e-12);
        }
        let ua = unitary_of(&a).unwrap();
        let ub = unitary_of(&b).unwrap();
        let uab = unitary_of(&a.concat(&b).unwrap()).unwrap();
        prop_assert!(ub.matmul(&ua).unwrap().max_abs_diff(&uab).unwrap() < 1e-9);
    }

    #[test]
    fn decomposition_keeps_the_unitary(c in circuit()) {
        let f = gate_fidelity(&unitary_of(&c).unwrap(), &unitary_of(&c.decomposed()).unwrap()).unwrap();
        prop_assert!((f - 1.0).abs() < 1e-9);
    }

    #[test]
    fn json_round_trip(c in circuit()) {
        prop_assert_eq!(Circuit::from_json(&c.to_json()).unwrap(), c);
    }

    #[test]
    fn bhattacharyya_properties((p, q) in (1usize..=4).prop_flat_map(|n| (dist(n), dist(n)))) {
        let b = bhattacharyya(&p, &q).unwrap();
        prop_assert!((0.0..=1.0).contains(&b));
        prop_assert_eq!(b, bhattacharyya(&q, &p).unwrap());
        prop_assert!((bhattacharyya(&p, &p).unwrap() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn samples_are_distributions(p in dist(3), shots in 1usize..2000, seed in any::<u64>()) {
        let s = sample(&p, shots, seed).unwrap();
        prop_assert!((s.probs().iter().sum::<f64>() - 1.0).abs() < 1e-9);
        for (a, b) in s.probs().iter().zip(p.probs()) {
            if *b == 0.0 {
                prop_assert_eq!(*a, 0.0);
            }
        }
    }

    #[test]
    fn encoding_is_injective(
        n in 1usize..=3,
        a in prop::collection::vec(0usize..100, 0..=6),
        b in prop::collection::vec(0usize..100, 0..=6),
    ) {
        let space = ActionSpace::new(n).unwrap();
        let g = space.len();
        let ca = space.circuit(&a.iter().map(|x| x % g).collect::<Vec<_>>()).unwrap();
        let cb = space.circuit(&b.iter().map(|x| x % g).collect::<Vec<_>>()).unwrap();
        let ea = encode_state(&ca, 6).unwrap();
        let eb = encode_state(&cb, 6).unwrap();
        prop_assert_eq!(ea == eb, ca == cb);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(16))]

    #[test]
    fn search_policy_is_a_distribution(seed in any::<u64>(), sims in 1usize..60, prefix in prop::collection::vec(0usize..14, 0..3)) {
        let t = Target::iqft(2).unwrap();
        let c = MctsConfig { seed, sims_per_move: sims, ..MctsConfig::for_qubits(2) };
        let root = ActionSpace::new(2).unwrap().circuit(&prefix).unwrap();
        let pi = mcts_policy(&root, &t, &Uniform(14), &c).unwrap();
        prop_assert_eq!(pi.len(), 14);
        prop_assert!(pi.iter().all(|&p| p >= 0.0));
        prop_assert!((pi.iter().sum::<f64>() - 1.0).abs() < 1e-6);
        // visit shares are multiples of 1/sims
        for p in &pi {
            let k = p * sims as f64;
            prop_assert!((k - k.round()).abs() < 1e-9);
        }
    }

    #[test]
    fn network_outputs_are_bounded(seed in any::<u64>(), state in prop::collection::vec(0u16..=6, 4)) {
        let net = DualNet::new(NetConfig { channels: 4, seed, ..NetConfig::new(6, 4) }).unwrap();
        let (q, v) = net.predict(&state).unwrap();
        prop_assert!((q.iter().map(|x| x.exp()).sum::<f64>() - 1.0).abs() < 1e-5);
        prop_assert!((-1.0..=1.0).contains(&v));
        prop_assert_eq!(net.predict(&state).unwrap(), (q, v));
    }
}
