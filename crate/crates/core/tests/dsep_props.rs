use bnalg_core::constraints::{check_vanishing, ci_minor_ideal};
use bnalg_core::net_model::{d_separated, observable_distribution, sample_parameters, CIStatement, NetworkSpec, Node};
use num_rational::BigRational;
use proptest::prelude::*;

/// Up to five nodes with edges only from lower to higher index; some nodes
/// hidden, at least two observed.
fn network() -> impl Strategy<Value = NetworkSpec> {
    (2usize..=5)
        .prop_flat_map(|n| {
            (
                prop::collection::vec(2usize..=3, n),
                prop::collection::vec(any::<bool>(), n * n),
                prop::collection::vec(prop::bool::weighted(0.25), n),
            )
        })
        .prop_map(|(cards, edges, hidden)| {
            let n = cards.len();
            let nodes = (0..n)
                .map(|i| Node {
                    name: format!("V{i}"),
                    card: cards[i],
                    parents: (0..i).filter(|&p| edges[p * n + i]).collect(),
                    hidden: i >= 2 && hidden[i],
                })
                .collect();
            NetworkSpec::new(nodes).unwrap()
        })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    /// d-separated statements give minors that vanish on the model; connected
    /// statements give minors that do not vanish at a generic point.
    #[test]
    fn d_separation_matches_ci_minors(net in network(), roles in prop::collection::vec(0u8..4, 5), seed in any::<u64>()) {
        let observed = net.observed();
        let pick = |role: u8| observed.iter().copied().filter(|&v| roles[v] == role).collect::<Vec<_>>();
        let (a, b, c) = (pick(0), pick(1), pick(2));
        prop_assume!(!a.is_empty() && !b.is_empty());
        let stmt = CIStatement::new(&net, &a, &b, &c).unwrap();
        let cs = ci_minor_ideal(&net, &stmt).unwrap();
        let table = observable_distribution(&net, &sample_parameters::<BigRational>(&net, seed));
        let vanish = check_vanishing(&cs, &table, 0.0).unwrap().all_vanish;
        prop_assert_eq!(vanish, d_separated(&net, &stmt), "{}", stmt.display(&net));
    }
}
