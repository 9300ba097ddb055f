//! Property tests for the invariants of each module.

use std::sync::{Arc, OnceLock};

use proptest::prelude::*;

use matsuo_core::algebra::{critical_values, radical_dim, AlgebraVector, Matsuo};
use matsuo_core::axial::{adjoint_matrix, eigen_decompose, miyamoto_point_map, FusionLaw, MiyamotoMap};
use matsuo_core::classify::{
    classify, enumerate_configs, support_dimension, symmetric_supports, ClassifyOptions, Sampling,
};
use matsuo_core::closure::{Closure, Generator, Role, ScalarMode, Subalgebra};
use matsuo_core::flip::{classify_orbits, doubles_primitive_in_fixed, FlipInvolution, FlipKind};
use matsuo_core::group::{FiniteGroup, GroupAutomorphism, GroupName};
use matsuo_core::linalg::Matrix;
use matsuo_core::scalar::{rat, ratio, rational_roots_int, EtaScalar, Field, IntPoly, Rational};
use matsuo_core::space::{Family, FischerSpace};

fn cached(spec: &'static str) -> Arc<FischerSpace> {
    static SPACES: OnceLock<std::sync::Mutex<Vec<(&'static str, Arc<FischerSpace>)>>> = OnceLock::new();
    let lock = SPACES.get_or_init(Default::default);
    let mut v = lock.lock().unwrap();
    if let Some((_, s)) = v.iter().find(|(k, _)| *k == spec) {
        return s.clone();
    }
    let s = Arc::new(FischerSpace::from_spec(spec).unwrap());
    v.push((spec, s.clone()));
    s
}

fn small_rational() -> impl Strategy<Value = Rational> {
    (-12i64..=12, 1i64..=6).prop_map(|(n, d)| ratio(n, d))
}

fn int_poly(max_deg: usize) -> impl Strategy<Value = IntPoly> {
    prop::collection::vec(-6i64..=6, 0..=max_deg + 1).prop_map(|c| IntPoly::from_i64s(&c))
}

fn eta_scalar() -> impl Strategy<Value = EtaScalar> {
    (int_poly(3), int_poly(2)).prop_filter_map("zero denominator", |(n, d)| {
        if d.is_zero() {
            None
        } else {
            EtaScalar::from_fraction(n, d).ok()
        }
    })
}

fn int_vector(len: usize) -> impl Strategy<Value = AlgebraVector<EtaScalar>> {
    prop::collection::vec((0..len, -3i64..=3), 1..5)
        .prop_map(|e| AlgebraVector::from_entries(e.into_iter().map(|(k, c)| (k, EtaScalar::from_int(c)))))
}

// scalar field

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn field_axioms(a in eta_scalar(), b in eta_scalar(), c in eta_scalar()) {
        prop_assert_eq!(a.plus(&b).plus(&c), a.plus(&b.plus(&c)));
        prop_assert_eq!(a.times(&b).times(&c), a.times(&b.times(&c)));
        prop_assert_eq!(a.plus(&b).times(&c), a.times(&c).plus(&b.times(&c)));
        prop_assert_eq!(a.times(&b), b.times(&a));
        if !a.is_zero() {
            prop_assert!(a.times(&a.inverse().unwrap()).is_one());
        }
        prop_assert!(a.minus(&a).is_zero());
    }

    #[test]
    fn evaluation_is_a_homomorphism(a in eta_scalar(), b in eta_scalar(), r in small_rational()) {
        if let (Ok(x), Ok(y)) = (a.evaluate(&r), b.evaluate(&r)) {
            prop_assert_eq!(a.times(&b).evaluate(&r).unwrap(), x.times(&y));
            prop_assert_eq!(a.plus(&b).evaluate(&r).unwrap(), x.plus(&y));
        }
    }

    #[test]
    fn rational_roots_are_complete(roots in prop::collection::vec((-4i64..=4, 1i64..=3), 0..4), extra in int_poly(2)) {
        // product of linear factors (d x - n) times a random cofactor
        let mut p = IntPoly::one();
        for &(n, d) in &roots {
            p = p.mul(&IntPoly::from_i64s(&[-n, d]));
        }
        let p = if extra.is_zero() { p } else { p.mul(&extra) };
        prop_assume!(!p.is_zero());
        let found = rational_roots_int(&p).unwrap();
        for r in &found {
            prop_assert!(p.eval(r).is_zero());
        }
        for &(n, d) in &roots {
            prop_assert!(found.contains(&ratio(n, d)));
        }
        // candidates from the rational root theorem outside the set are not roots
        if let (Some(lead), Some(trail)) = (p.leading(), p.trailing()) {
            let (lead, trail) = (lead.clone(), trail.clone());
            for num in 1i64..=24 {
                for den in 1i64..=24 {
                    let (nb, db) = (num.into(), den.into());
                    let nb: num_bigint::BigInt = nb;
                    let db: num_bigint::BigInt = db;
                    if (&trail % &nb).sign() != num_bigint::Sign::NoSign || (&lead % &db).sign() != num_bigint::Sign::NoSign {
                        continue;
                    }
                    for r in [ratio(num, den), ratio(-num, den)] {
                        if !found.contains(&r) {
                            prop_assert!(!p.eval(&r).is_zero());
                        }
                    }
                }
            }
        }
    }
}

// base groups

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn malformed_tables_are_rejected(g in 0usize..8, x in 0usize..27, y in 0usize..27, shift in 1usize..27) {
        let group = FiniteGroup::builtin(GroupName::ALL[g]);
        let n = group.order();
        prop_assume!(n > 1);
        let (x, y) = (x % n, y % n);
        let mut table = group.table().to_vec();
        table[x][y] = (table[x][y] + 1 + shift % (n - 1)) % n;
        prop_assert!(FiniteGroup::from_table("bad", group.labels().to_vec(), table).is_err());
    }

    #[test]
    fn inner_automorphisms_compose(gi in 0usize..8, a in 0usize..27, b in 0usize..27) {
        let group = FiniteGroup::builtin(GroupName::ALL[gi]);
        let n = group.order();
        let f = GroupAutomorphism::new(&group, group.conjugation(a % n)).unwrap();
        let g = GroupAutomorphism::new(&group, group.conjugation(b % n)).unwrap();
        let fg = f.then(&group, &g).unwrap();
        prop_assert!(GroupAutomorphism::new(&group, fg.image().to_vec()).is_ok());
    }
}

#[test]
fn builtin_groups_are_legal_bases() {
    for g in GroupName::ALL {
        assert!(FiniteGroup::builtin(g).validate_orders(), "{g:?}");
    }
}

// Fischer spaces

#[test]
fn named_spaces_are_regular_and_connected() {
    for family in Family::ALL {
        for n in 2..=4 {
            let s = FischerSpace::build_named(family, n).unwrap();
            let m = s.base().order();
            assert_eq!(s.len(), m * n * (n - 1) / 2, "{}", s.id());
            let st = s.stats();
            assert_eq!(st.degree_min, st.degree_max, "{}", s.id());
            if n >= 3 {
                assert!(s.is_connected(), "{}", s.id());
            }
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn third_point_is_symmetric_and_closes_lines(spec in prop::sample::select(vec!["W3A:4", "W2D:4", "WrA4:3", "Wr3x3:3"]), p in 0usize..200, q in 0usize..200) {
        let s = cached(spec);
        let (p, q) = (p % s.len(), q % s.len());
        prop_assume!(p != q && s.collinear(p, q));
        let r = s.third(p, q).unwrap();
        prop_assert_eq!(s.third(q, p), Some(r));
        prop_assert_eq!(s.third(p, r), Some(q));
        prop_assert_eq!(s.third(r, q), Some(p));
    }
}

// Matsuo algebra

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn frobenius_form_associates(u in int_vector(18), v in int_vector(18), w in int_vector(18)) {
        let s = cached("W3A:4");
        let m = Matsuo::symbolic(&s);
        let uv = m.product(&u, &v).unwrap();
        let vw = m.product(&v, &w).unwrap();
        prop_assert_eq!(m.frobenius(&uv, &w).unwrap(), m.frobenius(&u, &vw).unwrap());
    }

    #[test]
    fn product_is_commutative_and_linear(u in int_vector(18), v in int_vector(18), w in int_vector(18), a in eta_scalar()) {
        let s = cached("W3A:4");
        let m = Matsuo::symbolic(&s);
        prop_assert_eq!(m.product(&u, &v).unwrap(), m.product(&v, &u).unwrap());
        let lhs = m.product(&u, &v.scaled(&a).plus(&w)).unwrap();
        let rhs = m.product(&u, &v).unwrap().scaled(&a).plus(&m.product(&u, &w).unwrap());
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn points_and_orthogonal_pairs_are_idempotents(p in 0usize..18, q in 0usize..18) {
        let s = cached("W3A:4");
        let m = Matsuo::symbolic(&s);
        prop_assert!(m.is_idempotent(&AlgebraVector::point(p)).unwrap());
        if p != q && !s.collinear(p, q) {
            prop_assert!(m.is_idempotent(&AlgebraVector::sum_of(&[p, q])).unwrap());
        }
    }
}

#[test]
fn radical_is_nonzero_exactly_at_roots() {
    for spec in ["A:3", "A:4", "W2A:3", "W3A:3", "W2D:3", "Wr3x3:2"] {
        let s = FischerSpace::from_spec(spec).unwrap();
        for r in critical_values(&s).rational_roots {
            assert!(radical_dim(&s, &r).unwrap() > 0, "{spec} at {r}");
        }
        assert_eq!(radical_dim(&s, &ratio(3, 7)).unwrap(), 0, "{spec}");
    }
}

// closure

fn point_generators(space: &FischerSpace) -> impl Strategy<Value = Vec<Generator>> {
    let n = space.len();
    prop::collection::vec(0..n, 1..4).prop_map(|ps| ps.into_iter().map(Generator::point).collect())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn closure_is_a_closure_operator(gens in point_generators(&cached("W2D:3")), extra in 0usize..12) {
        let s = cached("W2D:3");
        let eta0 = rat(7);
        let a = Closure::new(s.clone(), gens.clone()).evaluated(&eta0).unwrap();
        // extensive
        for g in &gens {
            prop_assert!(a.contains(&g.vector));
        }
        // closed: every product of basis rows reduces to zero
        prop_assert!(a.is_closed());
        // monotone
        let mut more = gens.clone();
        more.push(Generator::point(extra));
        let b = Closure::new(s.clone(), more).evaluated(&eta0).unwrap();
        for v in a.basis() {
            prop_assert!(b.contains(v));
        }
        // idempotent
        let again: Vec<_> = a.basis().iter().map(|v| Generator::new(v.clone(), Role::Vector)).collect();
        let c = Closure::new(s.clone(), again).evaluated(&eta0).unwrap();
        prop_assert_eq!(c.canonical_basis(), a.canonical_basis());
    }

    #[test]
    fn closure_ignores_generator_order(gens in point_generators(&cached("W3A:3")), seed in any::<u64>()) {
        let s = cached("W3A:3");
        let a = Closure::new(s.clone(), gens.clone()).symbolic().unwrap();
        let mut shuffled = gens.clone();
        let len = shuffled.len();
        shuffled.rotate_left((seed as usize) % len);
        shuffled.reverse();
        let b = Closure::new(s.clone(), shuffled).symbolic().unwrap();
        prop_assert_eq!(a.canonical_basis(), b.canonical_basis());
        prop_assert!(a.is_closed());
    }

    #[test]
    fn modes_agree_at_safe_parameters(gens in point_generators(&cached("W3A:3")), eta in 3i64..40) {
        let s = cached("W3A:3");
        let eta0 = rat(eta);
        prop_assume!(matsuo_core::closure::is_safe_eta(&s, &eta0));
        let c = Closure::new(s.clone(), gens);
        prop_assert_eq!(c.symbolic().unwrap().dimension(), c.evaluated(&eta0).unwrap().dimension());
    }

    #[test]
    fn structure_constants_are_symmetric(gens in point_generators(&cached("W3A:3"))) {
        let s = cached("W3A:3");
        let a = Closure::new(s.clone(), gens).symbolic().unwrap();
        let t = a.structure_constants();
        for i in 0..t.len() {
            for j in 0..t.len() {
                prop_assert_eq!(&t[i][j], &t[j][i]);
            }
        }
    }
}

// axial verifier

fn annihilates(m: &Matrix<EtaScalar>, roots: &[EtaScalar]) -> bool {
    let mut acc = Matrix::identity(m.rows());
    for r in roots {
        acc = acc.mul(&m.shifted(r));
    }
    acc.is_zero()
}

#[test]
fn single_axes_have_jordan_minimal_polynomial() {
    for spec in ["A:4", "W2A:3", "W3A:3", "W2D:3", "W3D:3", "WrA4:2", "Wr3x3:2", "Wr3p2:2"] {
        let s = Arc::new(FischerSpace::from_spec(spec).unwrap());
        let whole = Subalgebra::whole(s.clone(), EtaScalar::eta(), ScalarMode::Symbolic).unwrap();
        let roots = [EtaScalar::one(), EtaScalar::zero(), EtaScalar::eta()];
        for p in 0..s.len() {
            let ad = adjoint_matrix(&whole, &AlgebraVector::point(p)).unwrap();
            assert!(annihilates(&ad, &roots), "{spec} at {}", s.label(p));
            let dec = eigen_decompose(&whole, &AlgebraVector::point(p), &FusionLaw::jordan()).unwrap();
            assert_eq!(dec.dims().values().sum::<usize>(), s.len());
        }
    }
}

#[test]
fn double_axes_have_monster_minimal_polynomial() {
    let eta = EtaScalar::eta();
    let roots = [EtaScalar::one(), EtaScalar::zero(), eta.plus(&eta), eta.clone()];
    for kind in [FlipKind::W2A, FlipKind::W3A, FlipKind::W2D, FlipKind::WrA4Outer, FlipKind::Wr3x3] {
        let tau = FlipInvolution::standard(kind, 2).unwrap();
        let a = matsuo_core::flip::flip_closure(&tau).symbolic().unwrap();
        for (p, q) in classify_orbits(&tau).doubles {
            let ad = adjoint_matrix(&a, &AlgebraVector::sum_of(&[p, q])).unwrap();
            assert!(annihilates(&ad, &roots), "{kind}");
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn miyamoto_maps_preserve_structure(spec in prop::sample::select(vec!["W2A:3", "W3A:3", "W2D:3", "WrA4:2"]), p in 0usize..24) {
        let s = cached(spec);
        let p = p % s.len();
        let whole = Subalgebra::whole(s.clone(), EtaScalar::eta(), ScalarMode::Symbolic).unwrap();
        let perm = miyamoto_point_map(&s, p);
        prop_assert!(s.is_automorphism(&perm));
        let t = MiyamotoMap::from_point_perm(&whole, &perm).unwrap();
        prop_assert!(t.is_involution());
        prop_assert!(t.preserves_form(&whole).unwrap());
        prop_assert!(t.is_automorphism(&whole).unwrap());
    }
}

// flip lab

#[test]
fn double_orbits_are_primitive_in_fixed_subalgebra() {
    for kind in FlipKind::ALL {
        for k in 1..=2 {
            let tau = FlipInvolution::standard(kind, k).unwrap();
            if tau.space().len() > 60 {
                continue;
            }
            assert!(doubles_primitive_in_fixed(&tau, &rat(7)).unwrap(), "{kind} k={k}");
        }
    }
}

// classification

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn config_symmetries_are_sound(i in 0usize..231) {
        let s = cached("W3A:4");
        let configs = enumerate_configs(&s, &Sampling::Full).unwrap();
        let cfg = &configs[i % configs.len()];
        let eta0 = rat(7);
        let base = support_dimension(&s, cfg.points(), &eta0).unwrap();
        for support in symmetric_supports(cfg) {
            prop_assert_eq!(support_dimension(&s, support, &eta0).unwrap(), base);
        }
    }

    #[test]
    fn ambient_automorphisms_preserve_dimension(i in 0usize..231, p in 0usize..18) {
        let s = cached("W3A:4");
        let configs = enumerate_configs(&s, &Sampling::Full).unwrap();
        let cfg = &configs[i % configs.len()];
        let eta0 = rat(7);
        let moved = cfg.mapped(&miyamoto_point_map(&s, p));
        prop_assert_eq!(
            support_dimension(&s, moved.points(), &eta0).unwrap(),
            support_dimension(&s, cfg.points(), &eta0).unwrap()
        );
    }
}

#[test]
fn classification_is_deterministic() {
    let s = cached("WrA4:2");
    let run = |threads| {
        let opts = ClassifyOptions {
            sampling: Sampling::Random { count: 30, seed: 5 },
            threads: Some(threads),
            ..ClassifyOptions::default()
        };
        serde_json::to_string(&classify(s.clone(), &opts).unwrap()).unwrap()
    };
    let one = run(1);
    assert_eq!(one, run(1));
    assert_eq!(one, run(4));
}

#[test]
fn disconnected_configs_split_in_small_ambients() {
    for spec in ["W2A:4", "W3A:4", "W2D:3", "W3D:3", "WrA4:2"] {
        let s = cached(spec);
        let r = classify(s, &ClassifyOptions::default()).unwrap();
        for b in r.buckets.iter().filter(|b| !b.connected) {
            let ds = b.direct_sum.as_ref().unwrap();
            assert_eq!(ds.passed, b.examined, "{spec} bucket {}", b.diagram_code);
        }
    }
}
