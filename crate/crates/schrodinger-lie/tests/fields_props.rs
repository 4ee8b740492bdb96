use proptest::prelude::*;
use schrodinger_lie::equivalence::{random_function, random_generator};
use schrodinger_lie::expr::{parse, Expr, Sampler, SamplerConfig, SurrogateBinding};
use schrodinger_lie::fields::{bracket_generic, bracket_structural, expand, GeneratorCoeffs, VectorField};

fn sampler(seed: u64) -> Sampler {
    Sampler::new(SamplerConfig { seed, points: 30, ..SamplerConfig::default() })
}

fn zero(es: &[Expr], s: &mut Sampler) -> bool {
    let b = SurrogateBinding::new();
    es.iter().all(|e| s.check_with(e, &b).unwrap().pass)
}

fn n_of(seed: u64) -> usize {
    1 + (seed % 3) as usize
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn antisymmetry(seed in any::<u64>()) {
        let mut s = sampler(seed);
        let n = n_of(seed);
        let (a, b) = (random_generator(&mut s, n), random_generator(&mut s, n));
        let sum = bracket_structural(&a, &b).add(&bracket_structural(&b, &a));
        prop_assert!(zero(&sum.components(), &mut s));
    }

    #[test]
    fn jacobi(seed in any::<u64>()) {
        let mut s = sampler(seed);
        let n = n_of(seed);
        let g: Vec<GeneratorCoeffs> = (0..3).map(|_| random_generator(&mut s, n)).collect();
        let br = bracket_structural;
        let sum = br(&g[0], &br(&g[1], &g[2])).add(&br(&g[1], &br(&g[2], &g[0]))).add(&br(&g[2], &br(&g[0], &g[1])));
        prop_assert!(zero(&sum.components(), &mut s));
    }

    #[test]
    fn structural_matches_generic(seed in any::<u64>()) {
        let mut s = sampler(seed);
        let n = n_of(seed);
        let (a, b) = (random_generator(&mut s, n), random_generator(&mut s, n));
        let diff = expand(&bracket_structural(&a, &b)).sub(&bracket_generic(&expand(&a), &expand(&b)));
        prop_assert!(zero(&diff.components(), &mut s));
    }

    #[test]
    fn expand_separates_coefficients(seed in any::<u64>(), slot in 0usize..4) {
        let mut s = sampler(seed);
        let g = random_generator(&mut s, 2);
        let mut h = g.clone();
        let bump = random_function(&mut s) + Expr::one();
        match slot {
            0 => h.tau = &h.tau + &bump,
            1 => h.chi[1] = &h.chi[1] + &bump,
            2 => h.sigma = &h.sigma + &bump,
            _ => h.rho = &h.rho + &bump,
        }
        let d = expand(&g).sub(&expand(&h));
        prop_assert!(!zero(&d.components(), &mut s));
        prop_assert!(zero(&expand(&g).sub(&expand(&g.clone())).components(), &mut s));
    }
}

#[test]
fn fifty_oracle_pairs() {
    let mut s = sampler(50);
    for k in 0..50 {
        let (a, b) = (random_generator(&mut s, 2), random_generator(&mut s, 2));
        let diff = expand(&bracket_structural(&a, &b)).sub(&bracket_generic(&expand(&a), &expand(&b)));
        assert!(zero(&diff.components(), &mut s), "pair {k}");
    }
}

#[test]
fn solution_generators_bracket_by_the_listed_rules() {
    // η⁰ need not solve the equation for bracket identities.
    let mut s = sampler(7);
    let eta = parse("t*x1^2 + i*x2 - 3*t^2").unwrap();
    let z = GeneratorCoeffs::z(2, eta);
    for _ in 0..10 {
        let g = random_generator(&mut s, 2);
        let diff = expand(&bracket_structural(&g, &z)).sub(&bracket_generic(&expand(&g), &expand(&z)));
        assert!(zero(&diff.components(), &mut s));
    }
}

#[test]
fn generic_bracket_is_antisymmetric_on_arbitrary_fields() {
    let mut s = sampler(3);
    let f = |a: &str, b: &str, c: &str| VectorField {
        t: parse(a).unwrap(),
        x: vec![parse(b).unwrap(), parse(c).unwrap()],
        psi: parse("i*psi*x1").unwrap(),
        psi_conj: parse("-i*conj(psi)*x1").unwrap(),
    };
    let (u, v) = (f("t^2", "x2", "cos(t)*x1"), f("1", "t*x1", "x1*x2"));
    let sum = bracket_generic(&u, &v);
    let back = bracket_generic(&v, &u);
    let total: Vec<Expr> = sum.components().iter().zip(back.components()).map(|(a, b)| a + &b).collect();
    assert!(zero(&total, &mut s));
}
