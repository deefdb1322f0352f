//! Values checked against independent computations rather than the code
//! path that produced them.

use std::collections::{BTreeSet, HashMap};

use ekr_core::certificate::{verify, Certificate, CertificateKind};
use ekr_core::characters::{derangement_category_sums, sl_category_sums, GlCharacter};
use ekr_core::constructions as cons;
use ekr_core::ekr::{character_sum, coset_slice_profile, module_projection};
use ekr_core::search::{self, Budget};
use ekr_core::{CharacterTable, Family, GroupContext};
use num_traits::ToPrimitive;

fn key(degree: f64, sums: [f64; 4]) -> (i64, [i64; 4]) {
    // category sums are half-integers; compare doubled values
    (
        (2.0 * degree).round() as i64,
        [0, 1, 2, 3].map(|k| (2.0 * sums[k]).round() as i64),
    )
}

#[test]
fn sl_category_sums_match_class_algebra() {
    for q in [3u32, 4, 5, 7, 8, 9] {
        let ctx = GroupContext::build(Family::Sl, q).unwrap();
        let table = CharacterTable::from_central(&ctx).unwrap();
        let mut computed: HashMap<(i64, [i64; 4]), i64> = HashMap::new();
        for row in &table.rows {
            let s = derangement_category_sums(&ctx, row).unwrap();
            for z in &s {
                assert!(z.im.abs() < 1e-8 && (2.0 * z.re - (2.0 * z.re).round()).abs() < 1e-8, "q={q}");
            }
            *computed.entry(key(row.degree as f64, s.map(|z| z.re))).or_default() += 1;
        }
        let mut published: HashMap<(i64, [i64; 4]), i64> = HashMap::new();
        for row in sl_category_sums(q).unwrap() {
            if row.count > 0 {
                let sums = row.sums.map(|x| x.to_f64().unwrap());
                *published.entry(key(row.degree.to_f64().unwrap(), sums)).or_default() += row.count;
            }
        }
        assert_eq!(computed, published, "q={q}");
    }
}

#[test]
fn gl3_canonical_sets_and_line_stabilizers() {
    let ctx = GroupContext::build(Family::Gl, 3).unwrap();
    let n = ctx.degree();
    assert_eq!(n, 8);
    let mut sets = BTreeSet::new();
    let mut pairs = 0;
    for i in 0..n {
        for j in 0..n {
            let s: Vec<usize> = (0..ctx.order()).filter(|&g| ctx.images(g)[i] as usize == j).collect();
            assert_eq!(s.len(), ctx.order() / n);
            sets.insert(s);
            pairs += 1;
        }
    }
    // S_(x,y) = S_(cx,cy) for scalars c, so 64 pairs give 32 sets
    assert_eq!(pairs, 64);
    assert_eq!(sets.len(), 32);
    for dir in 0..=3 {
        let s = cons::line_stabilizer_coclique(&ctx, dir).unwrap();
        let ids: Vec<usize> = s.ids.iter().map(|&g| g as usize).collect();
        assert!(!sets.contains(&ids), "direction {dir}");
    }
}

#[test]
fn singer_subgroup_meets_classes_as_expected() {
    for q in [3u32, 4, 5, 7] {
        let ctx = GroupContext::build(Family::Gl, q).unwrap();
        let h = cons::singer_clique(&ctx).unwrap();
        let census = cons::singer_census(&ctx, &h);
        assert_eq!(census.scalars, (q - 1) as usize);
        assert_eq!(census.c1_classes_hit, (q - 1) as usize);
        assert_eq!(census.c4_hits.len(), census.c4_classes_total);
        assert!(census.c4_hits.iter().all(|&(_, k)| k == 2));
    }
}

#[test]
fn singer_character_sums() {
    for q in [4u32, 5, 7] {
        let ctx = GroupContext::build(Family::Gl, q).unwrap();
        let table = CharacterTable::gl_explicit(&ctx).unwrap();
        let h = cons::singer_clique(&ctx).unwrap();
        let m = q - 1;
        let mut seen = 0;
        for row in &table.rows {
            if let Some(GlCharacter::Rho2 { alpha, beta }) = row.gl {
                if (alpha + beta) % m == 0 {
                    let s = character_sum(&ctx, &h, row);
                    assert!((s.re - (q * q - 1) as f64).abs() < 1e-9 && s.im.abs() < 1e-9);
                    seen += 1;
                }
            }
        }
        assert!(seen > 0);
    }
}

#[test]
fn agl3_maximum_is_five_translation_cosets() {
    let ctx = GroupContext::build(Family::Agl, 3).unwrap();
    let out = search::max_coclique(&ctx, true, Budget::default()).unwrap();
    assert_eq!(out.size(), 45);
    let translations: Vec<u32> =
        (0..ctx.order()).filter(|&g| ctx.matrix(g) == ctx.matrix(0)).map(|g| g as u32).collect();
    let t = Certificate::new(&ctx, CertificateKind::Coclique, translations);
    assert_eq!(t.size, 9);
    assert_eq!(cons::left_coset_profile(&ctx, &out.certificate, &t), vec![9; 5]);
    let k = cons::block_stabilizer(&ctx).unwrap();
    assert_ne!(cons::left_coset_profile(&ctx, &out.certificate, &k).len() * k.size, 45);
}

#[test]
fn sl3_clique_from_clique_coclique_equality() {
    // a coclique of size 3 caps cliques at 24/3 = 8; the search must reach it
    let ctx = GroupContext::build(Family::Sl, 3).unwrap();
    let co = search::max_coclique(&ctx, true, Budget::default()).unwrap();
    let cl = search::max_clique(&ctx, true, Budget::default()).unwrap();
    assert_eq!(co.size() * cl.size(), ctx.order());
    verify(&ctx, &cl.certificate).unwrap();
}

#[test]
fn coset_profiles_of_gl3_cocliques() {
    let ctx = GroupContext::build(Family::Gl, 3).unwrap();
    let line = cons::line_stabilizer_coclique(&ctx, 0).unwrap();
    assert_eq!(coset_slice_profile(&ctx, &line).unwrap(), vec![3, 3]);
    for g in [5usize, 17, 40] {
        let mut p = coset_slice_profile(&ctx, &line.translate(&ctx, g)).unwrap();
        p.sort_unstable();
        assert_eq!(p, vec![3, 3]);
    }
}

#[test]
fn projection_of_line_stabilizer_stays_in_permutation_module() {
    let ctx = GroupContext::build(Family::Gl, 3).unwrap();
    let table = CharacterTable::gl_explicit(&ctx).unwrap();
    let s = cons::line_stabilizer_coclique(&ctx, 1).unwrap();
    let mult = table.permutation_multiplicities(&ctx);
    let mut total = 0.0;
    for (row, m) in table.rows.iter().zip(&mult) {
        let p = module_projection(&ctx, &s, row);
        total += p;
        if m.abs() < 1e-9 {
            assert!(p < 1e-8, "{}", row.label);
        }
    }
    // the isotypic projections resolve the identity
    assert!((total - s.size as f64).abs() < 1e-8);
}

#[test]
fn sl_weighted_rows_match_dense_spectrum() {
    use ekr_core::spectra::{canonical_weights, numeric_spectrum, sl_weighted_table};
    for q in [3u32, 4, 5, 7] {
        let ctx = GroupContext::build(Family::Sl, q).unwrap();
        let w = canonical_weights(Family::Sl, q).unwrap().to_vector(&ctx).unwrap();
        let dense = numeric_spectrum(&ctx, &w).unwrap();
        let t = sl_weighted_table(q).unwrap();
        for row in t.rows.iter().filter(|r| r.count > 0) {
            let v = row.computed.to_f64().unwrap();
            assert!(dense.iter().any(|&x| (x - v).abs() < 1e-6), "q={q} {}", row.label);
        }
        for &x in &dense {
            assert!(t.rows.iter().any(|r| r.count > 0 && (r.computed.to_f64().unwrap() - x).abs() < 1e-6));
        }
    }
}
