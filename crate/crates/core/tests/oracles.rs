use std::sync::Arc;

use egh_core::lpp::monomial_hilbert_function;
use egh_core::*;
use proptest::prelude::*;

fn ring(n: usize) -> Arc<RingContext> {
    Arc::new(RingContext::new(n, 101).unwrap())
}

fn monomial_ideal() -> impl Strategy<Value = (usize, Vec<Vec<u32>>)> {
    (1usize..=5).prop_flat_map(|n| {
        let gen = proptest::collection::vec(0u32..=3, n)
            .prop_filter("positive degree at most 6", |e| (1..=6).contains(&e.iter().sum::<u32>()));
        (Just(n), proptest::collection::vec(gen, 1..6))
    })
}

proptest! {
    #[test]
    fn monomial_ideals_count_standard_monomials((n, exps) in monomial_ideal()) {
        let r = ring(n);
        let monos: Vec<Monomial> = exps.iter().map(|e| Monomial::from_exponents(e).unwrap()).collect();
        let forms: Vec<Form> = monos
            .iter()
            .map(|m| Form::from_dense(&r, m.degree(), &unit_vector(n, m)))
            .collect();
        let counted = monomial_hilbert_function(n, &monos, 6);
        prop_assert_eq!(&hilbert_function(&r, &forms, 6).unwrap(), &counted);
        prop_assert_eq!(&InverseSystem::new(&r, &forms, 6).unwrap().hilbert_function(), &counted);
    }

    #[test]
    fn macaulay_bound_is_lex_growth(h in 0u64..=60, d in 1u32..=4) {
        prop_assert_eq!(macaulay_bound(h, d), lex_growth(h as usize, d));
    }
}

fn unit_vector(n: usize, m: &Monomial) -> Vec<u32> {
    monomials_of_degree(n, m.degree())
        .iter()
        .map(|x| (x == m) as u32)
        .collect()
}

/// Exponent vectors of degree `d` in `n` variables, greatest in lex first.
fn lex_monomials(n: usize, d: u32) -> Vec<Vec<u32>> {
    if n == 1 {
        return vec![vec![d]];
    }
    let mut out = Vec::new();
    for first in (0..=d).rev() {
        for mut rest in lex_monomials(n - 1, d - first) {
            rest.insert(0, first);
            out.push(rest);
        }
    }
    out
}

/// `Hf(d+1)` of the ideal generated by the largest lex segment of `R_d`
/// leaving `h` standard monomials, in just enough variables.
fn lex_growth(h: usize, d: u32) -> u64 {
    if h == 0 {
        return 0;
    }
    let n = (1..).find(|&n| lex_monomials(n, d).len() >= h).unwrap();
    let low = lex_monomials(n, d);
    let standard: std::collections::HashSet<Vec<u32>> = low[low.len() - h..].iter().cloned().collect();
    lex_monomials(n, d + 1)
        .into_iter()
        .filter(|m| {
            (0..n).filter(|&i| m[i] > 0).all(|i| {
                let mut q = m.clone();
                q[i] -= 1;
                standard.contains(&q)
            })
        })
        .count() as u64
}

#[test]
fn lpp_defect_pieces_by_counting_and_elimination() {
    for n in 5..=7usize {
        let r = ring(n);
        let (nn, room) = (n as i64, (n * (n + 1) / 2 - n) as i64);
        for delta in 0..n.min(room as usize) {
            let l = lpp_defect(&r, DegreeVector::quadrics(n), 2, delta).unwrap();
            let dl = delta as i64;
            let expected = nn * nn + nn * dl - dl * (dl + 3) / 2;
            assert_eq!(lpp_piece_dim(&l, 3) as i64, expected, "n={n} delta={delta}");
            let eliminated = ideal_piece(&r, &l.generator_forms(), 3).unwrap().dim();
            assert_eq!(eliminated as i64, expected);
        }
    }
}

#[test]
fn complete_intersections_are_binomial_rows() {
    let r = ring(5);
    let gens: Vec<Form> = ["x1^2 + x2*x3", "x2^2 + 7*x4*x5", "x3^2 + x1*x5", "x4^2 + 3*x1*x2", "x5^2 + x3*x4"]
        .iter()
        .map(|s| Form::parse(&r, s).unwrap())
        .collect();
    let q = ArtinQuotient::new(&r, gens).unwrap();
    assert_eq!(q.hilbert_function().values(), &[1, 5, 10, 10, 5, 1, 0]);
}
