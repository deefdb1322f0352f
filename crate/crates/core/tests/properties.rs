use std::sync::OnceLock;

use ekr_core::certificate::{verify, Certificate, CertificateKind};
use ekr_core::characters::CharacterTable;
use ekr_core::constructions as cons;
use ekr_core::ekr::{gl_spanning_gram, module_projection};
use ekr_core::lp::{build_lp, solve_lp, Tying};
use ekr_core::search::{self, max_clique_graph, BitGraph, Budget, SearchInstance, Target};
use ekr_core::spectra::{spectrum, WeightVector};
use ekr_core::{make_field, Fe, Family, GroupContext};
use proptest::prelude::*;

fn group(family: Family, q: u32) -> &'static GroupContext {
    static CACHE: OnceLock<Vec<GroupContext>> = OnceLock::new();
    let all = CACHE.get_or_init(|| {
        [(Family::Gl, 4), (Family::Sl, 5), (Family::Agl, 3), (Family::Pgl, 7), (Family::Psl, 9), (Family::Gl, 3)]
            .into_iter()
            .map(|(f, q)| GroupContext::build(f, q).unwrap())
            .collect()
    });
    all.iter().find(|g| g.family() == family && g.q() == q).expect("cached group")
}

fn any_group() -> impl Strategy<Value = &'static GroupContext> {
    prop_oneof![
        Just((Family::Gl, 4)),
        Just((Family::Sl, 5)),
        Just((Family::Agl, 3)),
        Just((Family::Pgl, 7)),
        Just((Family::Psl, 9)),
    ]
    .prop_map(|(f, q)| group(f, q))
}

fn brute_clique(n: usize, adj: &[Vec<bool>]) -> usize {
    let mut best = 0;
    for mask in 0u32..(1 << n) {
        let vs: Vec<usize> = (0..n).filter(|&v| mask >> v & 1 == 1).collect();
        if vs.len() > best && vs.iter().enumerate().all(|(a, &x)| vs[a + 1..].iter().all(|&y| adj[x][y])) {
            best = vs.len();
        }
    }
    best
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn field_axioms(q in prop::sample::select(vec![7u32, 8, 9, 25, 27, 49, 64, 121, 125, 169, 289]),
                    a in 0u16..289, b in 0u16..289, c in 0u16..289) {
        let f = make_field(q).unwrap();
        let m = q as u16;
        let (a, b, c) = (Fe(a % m), Fe(b % m), Fe(c % m));
        prop_assert_eq!(f.mul(a, f.add(b, c)), f.add(f.mul(a, b), f.mul(a, c)));
        prop_assert_eq!(f.mul(f.mul(a, b), c), f.mul(a, f.mul(b, c)));
        prop_assert_eq!(f.sub(f.add(a, b), b), a);
        if a != Fe::ZERO {
            prop_assert_eq!(f.mul(a, f.inv(a).unwrap()), Fe::ONE);
            prop_assert_eq!(f.exp(f.log(a).unwrap() as i64), a);
        }
    }

    #[test]
    fn group_laws_and_agreements(ctx in any_group(), g in any::<usize>(), h in any::<usize>(), k in any::<usize>()) {
        let n = ctx.order();
        let (g, h, k) = (g % n, h % n, k % n);
        prop_assert_eq!(ctx.mul(ctx.mul(g, h), k), ctx.mul(g, ctx.mul(h, k)));
        prop_assert_eq!(ctx.mul(g, ctx.inv(g)), 0);
        prop_assert_eq!(ctx.agreements(g, h), ctx.fix_count(ctx.quotient(g, h)));
        let x = ctx.conjugate(g, h);
        prop_assert_eq!(ctx.class_of(x), ctx.class_of(g));
        prop_assert_eq!(ctx.fix_count(x), ctx.fix_count(g));
    }

    #[test]
    fn translates_keep_certificates_valid(g in any::<usize>(), which in 0usize..4) {
        let (ctx, cert) = match which {
            0 => { let c = group(Family::Gl, 4); (c, cons::singer_clique(c).unwrap()) }
            1 => { let c = group(Family::Gl, 4); (c, cons::line_stabilizer_coclique(c, 2).unwrap()) }
            2 => { let c = group(Family::Agl, 3); (c, cons::block_stabilizer(c).unwrap()) }
            _ => { let c = group(Family::Pgl, 7); (c, cons::pgl_two_intersecting(c).unwrap()) }
        };
        let t = cert.translate(ctx, g % ctx.order());
        prop_assert_eq!(t.size, cert.size);
        prop_assert!(verify(ctx, &t).is_ok());
    }

    #[test]
    fn trivial_projection_is_size_squared_over_order(ids in prop::collection::btree_set(0u32..180, 1..30)) {
        let ctx = group(Family::Gl, 4);
        let table = CharacterTable::gl_explicit(ctx).unwrap();
        let s = Certificate::new(ctx, CertificateKind::Coclique, ids.into_iter().collect());
        let p = module_projection(ctx, &s, &table.rows[table.trivial_row().unwrap()]);
        let want = (s.size * s.size) as f64 / ctx.order() as f64;
        prop_assert!((p - want).abs() < 1e-9);
    }

    #[test]
    fn clique_search_matches_brute_force(n in 1usize..13, seed in any::<u64>(), density in 0.1f64..0.9) {
        let mut state = seed | 1;
        let mut adj = vec![vec![false; n]; n];
        for i in 0..n {
            for j in i + 1..n {
                state ^= state << 13; state ^= state >> 7; state ^= state << 17;
                let on = (state % 1000) as f64 / 1000.0 < density;
                adj[i][j] = on;
                adj[j][i] = on;
            }
        }
        let g = BitGraph::from_fn(n, |i, j| adj[i][j]);
        let r = max_clique_graph(&g, Budget::default());
        prop_assert!(g.is_clique(&r.clique));
        prop_assert_eq!(r.clique.len(), brute_clique(n, &adj));
    }

    #[test]
    fn spectra_multiplicities_sum_to_order(ctx in any_group(), seed in any::<u64>()) {
        let table = match ctx.family() {
            Family::Gl => CharacterTable::gl_explicit(ctx).unwrap(),
            _ => CharacterTable::from_central(ctx).unwrap(),
        };
        let mut w = WeightVector::unit(ctx);
        for (i, c) in ctx.classes().iter().enumerate() {
            if c.is_derangement {
                let j = c.inverse_class as usize;
                let v = ((seed ^ (i.min(j) as u64).wrapping_mul(0x9E37_79B9)) % 7) as f64 - 3.0;
                w.weights[i] = v;
            }
        }
        let rep = spectrum(ctx, &table, &w).unwrap();
        prop_assert_eq!(rep.total_multiplicity(), ctx.order() as u64);
        let row_sum: f64 = ctx.classes().iter().enumerate().map(|(i, c)| w.weights[i] * c.size as f64).sum();
        prop_assert!((rep.row_sum - row_sum).abs() < 1e-8 * (1.0 + row_sum.abs()));
        let trace: f64 = rep.entries.iter().map(|e| e.eigenvalue * e.multiplicity as f64).sum();
        prop_assert!(trace.abs() < 1e-7 * ctx.order() as f64);
    }

    #[test]
    fn lp_optimum_ignores_row_order(seed in any::<u64>()) {
        let ctx = group(Family::Agl, 3);
        let table = CharacterTable::from_central(ctx).unwrap();
        let lp = build_lp(ctx, &table, Tying::InversePairs).unwrap();
        let a = solve_lp(&lp).unwrap();
        let b = solve_lp(&lp.permuted_rows(seed)).unwrap();
        prop_assert!((a.objective - b.objective).abs() < 1e-7);
    }
}

#[test]
fn search_is_deterministic_under_node_budgets() {
    let ctx = group(Family::Pgl, 7);
    let inst = SearchInstance::new(ctx, Target::TwoIntersecting, true).unwrap();
    let runs: Vec<_> = (0..3).map(|_| search::run(ctx, &inst, None, Budget::nodes(500)).unwrap()).collect();
    for r in &runs[1..] {
        assert_eq!(r.certificate.ids, runs[0].certificate.ids);
        assert_eq!(r.optimality, runs[0].optimality);
        assert_eq!(r.nodes, runs[0].nodes);
    }
}

#[test]
fn gram_spectra_are_nonnegative() {
    for q in [3u32, 4, 5] {
        let ctx = GroupContext::build(Family::Gl, q).unwrap();
        let g = gl_spanning_gram(&ctx).unwrap();
        assert!(g.min_eigenvalue > -1e-6 && g.integer_residual < 1e-6);
        assert_eq!(g.rank, g.expected_rank);
    }
}
