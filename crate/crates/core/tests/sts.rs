use triadnet::sts::{
    bose, direct_system, is_admissible, skolem, sts_base, sts_construct, sts_extend, sts_product, validate,
    validate_triples,
};

/// Naive pair tally, independent of the library validator.
fn pair_counts(order: usize, triples: &[[usize; 3]]) -> Vec<Vec<usize>> {
    let mut m = vec![vec![0; order + 1]; order + 1];
    for t in triples {
        for (a, b) in [(t[0], t[1]), (t[0], t[2]), (t[1], t[2])] {
            m[a.min(b)][a.max(b)] += 1;
        }
    }
    m
}

fn is_exact_cover(order: usize, triples: &[[usize; 3]]) -> bool {
    let m = pair_counts(order, triples);
    (1..=order).all(|a| (a + 1..=order).all(|b| m[a][b] == 1))
}

#[test]
fn every_admissible_order_up_to_201() {
    for n in (3..=201).filter(|&n| is_admissible(n)) {
        let s = sts_construct(n).unwrap_or_else(|e| panic!("n = {n}: {e}"));
        assert_eq!(s.triples.len(), n * (n - 1) / 6, "n = {n}");
        assert!(is_exact_cover(n, &s.triples), "n = {n} via {}", s.recipe);
        let mut per_node = vec![0; n + 1];
        for t in &s.triples {
            for &u in t {
                per_node[u] += 1;
            }
        }
        assert!(per_node[1..].iter().all(|&c| c == (n - 1) / 2), "n = {n}");
        for sub in &s.subsystems {
            assert!(validate(&s.restrict(&sub.nodes)).is_ok(), "n = {n}, subsystem {sub:?}");
        }
    }
}

#[test]
fn inadmissible_orders_fail() {
    for n in 0..60 {
        assert_eq!(sts_construct(n).is_ok(), is_admissible(n), "n = {n}");
    }
}

#[test]
fn order_63_has_651_triples() {
    assert_eq!(sts_construct(63).unwrap().triples.len(), 651);
    let p = sts_product(&sts_base(7).unwrap(), &sts_base(9).unwrap());
    assert!(is_exact_cover(63, &p.triples));
}

#[test]
fn extension_with_trivial_point_doubles_plus_one() {
    for np in [7, 9, 13, 15] {
        let s = sts_extend(&sts_base(np).unwrap(), &sts_base(3).unwrap(), None).unwrap();
        assert_eq!(s.order, 2 * np + 1);
        assert!(is_exact_cover(s.order, &s.triples));
    }
}

#[test]
fn extension_rule_c_is_three_n_minus_six() {
    for np in [7, 9, 13, 15] {
        let base = sts_base(np).unwrap();
        let s = sts_extend(&sts_base(3).unwrap(), &base, Some(&base.triples[0])).unwrap();
        assert_eq!(s.order, 3 * np - 6);
        assert!(is_exact_cover(s.order, &s.triples));
    }
}

#[test]
fn direct_constructions_are_exact_covers() {
    for n in (7..=201).filter(|&n| is_admissible(n)) {
        let triples = if n % 6 == 3 { bose(n) } else { skolem(n) };
        assert!(is_exact_cover(n, &triples), "n = {n}");
        assert!(validate(&direct_system(n)).is_ok());
    }
}

#[test]
fn validator_agrees_with_naive_tally_on_random_lists() {
    use rand::{Rng, SeedableRng};
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(5);
    for _ in 0..200 {
        let order = rng.random_range(3..12);
        let len = rng.random_range(0..25);
        let triples: Vec<[usize; 3]> = (0..len)
            .map(|_| [rng.random_range(1..=order), rng.random_range(1..=order), rng.random_range(1..=order)])
            .collect();
        let report = validate_triples(order, &triples);
        let good: Vec<[usize; 3]> = triples
            .iter()
            .copied()
            .filter(|t| t[0] != t[1] && t[1] != t[2] && t[0] != t[2])
            .collect();
        assert_eq!(report.bad_triples.len(), triples.len() - good.len());
        let m = pair_counts(order, &good);
        let uncovered = (1..=order).flat_map(|a| (a + 1..=order).map(move |b| (a, b))).filter(|&(a, b)| m[a][b] == 0).count();
        let multi = (1..=order).flat_map(|a| (a + 1..=order).map(move |b| (a, b))).filter(|&(a, b)| m[a][b] > 1).count();
        assert_eq!(report.uncovered.len(), uncovered);
        assert_eq!(report.multiply_covered.len(), multi);
        assert_eq!(report.is_ok(), is_exact_cover(order, &triples) && good.len() == triples.len());
    }
}
