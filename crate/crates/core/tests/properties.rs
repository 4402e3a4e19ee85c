use num_bigint::BigInt;
use proptest::prelude::*;

use dunkl_core::poly::{MultiPoly, Multiplicity, Rational, Transposition};
use dunkl_core::quadrature::dirichlet_moment;
use dunkl_core::special::{humbert_phi2, pochhammer_exact, HumbertSpec, SeriesParams};

fn rational() -> impl Strategy<Value = Rational> {
    (-20i64..=20, 1i64..=6).prop_map(|(p, q)| Rational::new(BigInt::from(p), BigInt::from(q)))
}

fn positive_rational() -> impl Strategy<Value = Rational> {
    (1i64..=12, 1i64..=6).prop_map(|(p, q)| Rational::new(BigInt::from(p), BigInt::from(q)))
}

/// Random polynomial in `n` variables with total degree at most `max_deg`.
fn poly(n: usize, max_deg: u32) -> impl Strategy<Value = MultiPoly> {
    prop::collection::vec((prop::collection::vec(0..=max_deg, n), rational()), 0..6).prop_map(move |terms| {
        let mut p = MultiPoly::zero(n);
        for (mut e, c) in terms {
            // clip to the degree budget, highest variables first
            let mut excess = e.iter().sum::<u32>().saturating_sub(max_deg);
            for v in e.iter_mut().rev() {
                let cut = excess.min(*v);
                *v -= cut;
                excess -= cut;
            }
            p = &p + &MultiPoly::monomial(e, c);
        }
        p
    })
}

fn homogeneous(n: usize, deg: u32) -> impl Strategy<Value = MultiPoly> {
    poly(n, deg).prop_map(move |p| {
        let mut h = MultiPoly::zero(n);
        for (m, c) in p.terms() {
            if m.degree() == deg {
                h = &h + &MultiPoly::monomial(m.exps().to_vec(), c.clone());
            }
        }
        h
    })
}

fn sized_poly(max_n: usize, max_deg: u32) -> impl Strategy<Value = (usize, MultiPoly)> {
    (2..=max_n).prop_flat_map(move |n| (Just(n), poly(n, max_deg)))
}

fn pair(n: usize) -> impl Strategy<Value = (usize, usize)> {
    (1..=n, 1..=n).prop_filter("distinct", |(i, j)| i != j)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn transposition_is_an_involution(
        (p, (i, j)) in (2..=4usize).prop_flat_map(|n| (poly(n, 6), pair(n)))
    ) {
        let s = Transposition::new(i, j).unwrap();
        prop_assert_eq!(p.transpose(s).unwrap().transpose(s).unwrap(), p);
    }

    #[test]
    fn divided_difference_times_root_restores_difference(
        (n, p, (i, j)) in (2..=4usize).prop_flat_map(|n| (Just(n), poly(n, 6), pair(n)))
    ) {
        let s = Transposition::new(i, j).unwrap();
        let q = p.divided_difference(s).unwrap();
        let root = &MultiPoly::var(n, i).unwrap() - &MultiPoly::var(n, j).unwrap();
        prop_assert_eq!(&root * &q, &p - &p.transpose(s).unwrap());
    }

    #[test]
    fn kappa_zero_dunkl_is_partial((n, p) in sized_poly(4, 6), i in 1..=4usize) {
        prop_assume!(i <= n);
        let zero = Multiplicity::exact(Rational::from_integer(0.into())).unwrap();
        prop_assert_eq!(p.dunkl(i, &zero).unwrap(), p.partial(i).unwrap());
    }

    #[test]
    fn dunkl_lowers_degree_of_homogeneous(
        (n, h) in (2..=4usize).prop_flat_map(|n| (Just(n), (1..=6u32).prop_flat_map(move |d| homogeneous(n, d)))),
        kappa in positive_rational(),
        i in 1..=4usize,
    ) {
        prop_assume!(i <= n && !h.is_zero());
        let deg = h.total_degree().unwrap();
        let d = h.dunkl(i, &Multiplicity::exact(kappa).unwrap()).unwrap();
        prop_assert!(d.is_homogeneous());
        if !d.is_zero() {
            prop_assert_eq!(d.total_degree(), Some(deg - 1));
        }
    }

    #[test]
    fn print_parse_round_trip((n, p) in sized_poly(5, 8)) {
        let text = p.to_string();
        prop_assert_eq!(MultiPoly::parse(&text, n).unwrap(), p);
    }

    #[test]
    fn pochhammer_recurrence(a in rational(), m in 0u32..12) {
        let lhs = pochhammer_exact(&a, m + 1);
        let rhs = pochhammer_exact(&a, m) * (&a + Rational::from_integer(m.into()));
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn dirichlet_moments_are_consistent(kappa in positive_rational(), m in prop::collection::vec(0u32..5, 2..=4)) {
        // Σ_j E[t^{m+e_j}] = E[t^m (Σ t_j)] = E[t^m]
        let n = m.len();
        let base = dirichlet_moment(n, &kappa, &m).unwrap();
        let mut sum = Rational::from_integer(0.into());
        for j in 0..n {
            let mut up = m.clone();
            up[j] += 1;
            sum += dirichlet_moment(n, &kappa, &up).unwrap();
        }
        prop_assert_eq!(sum, base);
    }

    #[test]
    fn humbert_refinement_stays_within_bound(
        b in prop::collection::vec(0.0f64..2.5, 1..=4),
        extra in 0.0f64..2.0,
        seed in prop::collection::vec(-2.0f64..2.0, 4),
        coarse in 10usize..40,
    ) {
        let n = b.len();
        let x = seed[..n].to_vec();
        let c = b.iter().sum::<f64>() + extra + 1e-3;
        let spec = HumbertSpec::new(b, c, x).unwrap();
        let low = humbert_phi2(&spec, &SeriesParams::new(coarse, f64::INFINITY).unwrap()).unwrap();
        let high = humbert_phi2(&spec, &SeriesParams::new(80, f64::INFINITY).unwrap()).unwrap();
        let gap = (low.value - high.value).abs();
        prop_assert!(gap <= low.error_bound + low.roundoff + high.roundoff,
            "gap {gap:e} bound {:e}", low.error_bound);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn dunkl_operators_commute(
        (p, (i, j)) in (2..=4usize).prop_flat_map(|n| (poly(n, 6), pair(n))),
        kappa in positive_rational(),
    ) {
        let k = Multiplicity::exact(kappa).unwrap();
        let ij = p.dunkl(j, &k).unwrap().dunkl(i, &k).unwrap();
        let ji = p.dunkl(i, &k).unwrap().dunkl(j, &k).unwrap();
        prop_assert_eq!(ij, ji);
    }
}
