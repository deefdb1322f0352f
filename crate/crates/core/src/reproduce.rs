//! One runner per acceptance criterion. Each returns itemized pass/fail
//! results; nothing here panics on a failed check.

use std::time::Instant;

use num_rational::Rational64;
use serde::Serialize;

use crate::certificate::{verify, verify_translates};
use crate::characters::CharacterTable;
use crate::constructions as cons;
use crate::ekr;
use crate::error::Result;
use crate::group::{Family, GroupContext};
use crate::lp::{build_lp, lp_ceiling_check, solve_lp, LpStatus, Tying};
use crate::search::{self, Budget, Optimality, SearchInstance, Target};
use crate::spectra::{gl_spectrum, gl_weighted_table, numeric_spectrum, sl_weighted_table, spectrum_deviation};
use crate::spectra::{ratio_bound, WeightVector};

pub const CRITERIA: [u8; 9] = [1, 2, 3, 4, 5, 6, 7, 8, 9];
/// Seed for translate checks on constructed sets.
pub const TRANSLATE_SEED: u64 = 0x7A15_1A7E;

#[derive(Clone, Debug, Serialize)]
pub struct Item {
    pub label: String,
    pub pass: bool,
    pub detail: String,
}

#[derive(Clone, Debug, Serialize)]
pub struct CriterionReport {
    pub id: u8,
    pub title: &'static str,
    pub items: Vec<Item>,
    #[serde(skip)]
    pub elapsed_secs: f64,
}

impl CriterionReport {
    pub fn pass(&self) -> bool {
        self.items.iter().all(|i| i.pass)
    }

    pub fn line(&self) -> String {
        let failed: Vec<&str> = self.items.iter().filter(|i| !i.pass).map(|i| i.label.as_str()).collect();
        let mut s = format!(
            "{} criterion {}: {} ({} items)",
            if self.pass() { "PASS" } else { "FAIL" },
            self.id,
            self.title,
            self.items.len()
        );
        if !failed.is_empty() {
            s.push_str(&format!(" failed: {}", failed.join("; ")));
        }
        s
    }
}

/// Which q values a run covers. `None` runs each criterion's full list.
#[derive(Clone, Debug, Default)]
pub struct QFilter(pub Option<Vec<u32>>);

impl QFilter {
    fn keep(&self, q: u32) -> bool {
        self.0.as_ref().is_none_or(|v| v.contains(&q))
    }

    fn pick(&self, qs: &[u32]) -> Vec<u32> {
        qs.iter().copied().filter(|&q| self.keep(q)).collect()
    }
}

struct Collector {
    items: Vec<Item>,
}

impl Collector {
    fn new() -> Self {
        Self { items: Vec::new() }
    }

    fn check(&mut self, label: impl Into<String>, pass: bool, detail: impl Into<String>) {
        self.items.push(Item { label: label.into(), pass, detail: detail.into() });
    }

    /// Record an error from a sub-step as a failed item.
    fn attempt(&mut self, label: impl Into<String>, f: impl FnOnce(&mut Self) -> Result<()>) {
        let label = label.into();
        if let Err(e) = f(self) {
            self.check(label, false, format!("error: {e}"));
        }
    }

    fn finish(self, id: u8, title: &'static str, start: Instant) -> CriterionReport {
        CriterionReport { id, title, items: self.items, elapsed_secs: start.elapsed().as_secs_f64() }
    }
}

fn r(n: i64) -> Rational64 {
    Rational64::from_integer(n)
}

pub fn title(id: u8) -> &'static str {
    match id {
        1 => "GL derangement census",
        2 => "GL unit-weight spectrum",
        3 => "weighted GL eigenvalues",
        4 => "weighted SL eigenvalues",
        5 => "LP ratios",
        6 => "searched maxima",
        7 => "constructions",
        8 => "canonical-vector linear algebra",
        9 => "property suites",
        _ => "unknown",
    }
}

pub fn run(id: u8, filter: &QFilter) -> CriterionReport {
    let start = Instant::now();
    let mut c = Collector::new();
    match id {
        1 => census(&mut c, filter),
        2 => gl_unit(&mut c, filter),
        3 => gl_weighted(&mut c, filter),
        4 => sl_weighted(&mut c, filter),
        5 => lp_ratios(&mut c, filter),
        6 => searched(&mut c, filter),
        7 => constructions(&mut c, filter),
        8 => gram(&mut c, filter),
        9 => properties(&mut c, filter),
        _ => c.check(format!("criterion {id}"), false, "no such criterion"),
    }
    c.finish(id, title(id), start)
}

pub fn run_all(filter: &QFilter) -> Vec<CriterionReport> {
    CRITERIA.iter().map(|&id| run(id, filter)).collect()
}

fn census(c: &mut Collector, filter: &QFilter) {
    for q in filter.pick(&[2, 3, 4, 5, 7, 8]) {
        c.attempt(format!("q={q}"), |c| {
            let ctx = GroupContext::build(Family::Gl, q)?;
            let qi = q as i64;
            let formula = qi * (qi * qi * qi - 2 * qi * qi - qi + 3);
            let by_class = ctx.derangement_count() as i64;
            let brute = (0..ctx.order()).filter(|&g| ctx.images(g).iter().enumerate().all(|(i, &x)| i != x as usize));
            let brute = brute.count() as i64;
            c.check(
                format!("q={q}"),
                formula == by_class && by_class == brute,
                format!("formula {formula}, classes {by_class}, brute force {brute}"),
            );
            Ok(())
        });
    }
}

/// The four published eigenvalues with multiplicities, descending.
pub fn gl_unit_stated(q: u32) -> Vec<(i64, u64)> {
    let q = q as i64;
    let mut v = vec![
        (q * (q * q * q - 2 * q * q - q + 3), 1u64),
        (q, (q.pow(4) - 2 * q.pow(3) - 2 * q * q + 4 * q + 1) as u64),
        (-q * q + 2 * q, ((q + 1) * (q + 1) * (q - 2)) as u64),
        (-q * q + q + 1, (q * q) as u64),
    ];
    v.sort_by_key(|e| std::cmp::Reverse(e.0));
    v
}

fn gl_unit(c: &mut Collector, filter: &QFilter) {
    for q in filter.pick(&[3, 4, 5, 7]) {
        c.attempt(format!("q={q}"), |c| {
            let ctx = GroupContext::build(Family::Gl, q)?;
            let w = WeightVector::unit(&ctx);
            let rep = gl_spectrum(&ctx, &w)?;
            let got: Vec<(i64, u64)> =
                rep.grouped(1e-6).into_iter().map(|(v, m)| (v.round() as i64, m)).collect();
            let want = gl_unit_stated(q);
            c.check(
                format!("q={q} spectrum"),
                got == want && rep.total_multiplicity() == ctx.order() as u64,
                format!("computed {got:?}, stated {want:?}, ratio bound {:.4}", ratio_bound(&rep)?),
            );
            if q <= 5 {
                let num = numeric_spectrum(&ctx, &w)?;
                let dev = spectrum_deviation(&rep, &num);
                c.check(format!("q={q} dense"), dev <= 1e-6, format!("max deviation {dev:.2e}"));
            }
            Ok(())
        });
    }
}

fn gl_weighted(c: &mut Collector, filter: &QFilter) {
    for q in filter.pick(&[3, 4, 5, 7]) {
        c.attempt(format!("q={q}"), |c| {
            let ctx = GroupContext::build(Family::Gl, q)?;
            let t = gl_weighted_table(&ctx)?;
            let qi = q as i64;
            let designated: Vec<_> = t.rows.iter().filter(|row| row.stated == r(-1)).collect();
            let bad: Vec<String> = designated
                .iter()
                .filter(|row| row.computed != r(-1))
                .map(|row| format!("{} = {}", row.label, row.computed))
                .collect();
            c.check(format!("q={q} max"), t.max == r(qi * qi - 2), format!("max {} vs {}", t.max, qi * qi - 2));
            c.check(
                format!("q={q} rows at -1"),
                bad.is_empty(),
                format!("{} designated rows, off: {bad:?}", designated.len()),
            );
            c.check(
                format!("q={q} ratio"),
                t.ratio_bound == r(qi * (qi - 1)),
                format!("ratio bound {} vs {}", t.ratio_bound, qi * (qi - 1)),
            );
            Ok(())
        });
    }
}

fn sl_weighted(c: &mut Collector, filter: &QFilter) {
    for q in filter.pick(&[3, 5, 7, 4, 8]) {
        c.attempt(format!("q={q}"), |c| {
            let t = sl_weighted_table(q)?;
            let bad: Vec<String> = t
                .mismatches()
                .iter()
                .map(|row| format!("{}: computed {} stated {}", row.label, row.computed, row.stated))
                .collect();
            c.check(format!("q={q} rows"), bad.is_empty(), format!("{} rows, mismatches {bad:?}", t.rows.len()));
            c.check(
                format!("q={q} ratio"),
                t.ratio_bound == r(q as i64),
                format!("ratio bound {}", t.ratio_bound),
            );
            Ok(())
        });
    }
}

fn lp_ratios(c: &mut Collector, filter: &QFilter) {
    for (q, want) in [(3u32, 5.0), (4, 9.0), (5, 9.0), (7, 13.0)] {
        if !filter.keep(q) {
            continue;
        }
        c.attempt(format!("AGL q={q}"), |c| {
            let ctx = GroupContext::build(Family::Agl, q)?;
            let table = CharacterTable::from_central(&ctx)?;
            let lp = build_lp(&ctx, &table, Tying::InversePairs)?;
            let res = solve_lp(&lp)?;
            c.check(
                format!("AGL q={q}"),
                res.status == LpStatus::Optimal && (res.objective - want).abs() <= 1e-5,
                format!("objective {:.9}, bound {:.4}", res.objective, res.bound(ctx.order())),
            );
            Ok(())
        });
    }
    for q in filter.pick(&[4, 5]) {
        c.attempt(format!("GL q={q}"), |c| {
            let ctx = GroupContext::build(Family::Gl, q)?;
            let table = CharacterTable::gl_explicit(&ctx)?;
            let lp = build_lp(&ctx, &table, Tying::InversePairs)?;
            let res = solve_lp(&lp)?;
            let ceil = lp_ceiling_check(&ctx, &table, &lp, &res)?;
            let want = (q * q - 2) as f64;
            c.check(
                format!("GL q={q}"),
                (res.objective - want).abs() <= 1e-5 && ceil.attains_ceiling,
                format!("objective {:.9}, ceiling attained {}", res.objective, ceil.attains_ceiling),
            );
            Ok(())
        });
    }
}

fn searched(c: &mut Collector, filter: &QFilter) {
    if filter.keep(3) {
        c.attempt("AGL q=3 coclique", |c| {
            let ctx = GroupContext::build(Family::Agl, 3)?;
            let out = search::max_coclique(&ctx, true, Budget::default())?;
            c.check("AGL q=3 coclique", out.size() == 45 && out.proved(), outcome(&out));
            Ok(())
        });
    }
    let pgl = [(3u32, 2usize), (4, 4), (5, 5), (7, 8), (8, 10), (9, 12)];
    let psl = [(3u32, 1usize), (4, 4), (5, 4), (7, 4), (8, 10), (9, 8)];
    for (fam, rows) in [(Family::Pgl, &pgl), (Family::Psl, &psl)] {
        for &(q, want) in rows.iter() {
            if !filter.keep(q) {
                continue;
            }
            let label = format!("{fam} q={q}");
            c.attempt(label.clone(), |c| {
                let ctx = GroupContext::build(fam, q)?;
                let out = search::max_two_intersecting(&ctx, Budget::default())?;
                c.check(label, out.size() == want && out.proved(), outcome(&out));
                Ok(())
            });
        }
    }
    if filter.keep(11) {
        c.attempt("PGL q=11", |c| {
            let ctx = GroupContext::build(Family::Pgl, 11)?;
            let out = search::max_two_intersecting(&ctx, Budget::seconds(1800.0))?;
            let ok = match out.optimality {
                Optimality::Proved => out.size() == 17,
                Optimality::LowerBound => out.size() <= 17,
            };
            c.check("PGL q=11", ok, outcome(&out));
            Ok(())
        });
    }
}

fn outcome(out: &search::SearchOutcome) -> String {
    format!("size {} ({:?}), {} nodes", out.size(), out.optimality, out.nodes)
}

fn constructions(c: &mut Collector, filter: &QFilter) {
    for q in filter.pick(&[2, 3, 4, 5, 7, 8, 9]) {
        c.attempt(format!("Singer q={q}"), |c| {
            let ctx = GroupContext::build(Family::Gl, q)?;
            let s = cons::singer_clique(&ctx)?;
            verify_translates(&ctx, &s, 5, TRANSLATE_SEED)?;
            let n = (q * q - 1) as usize;
            c.check(format!("Singer q={q}"), s.size == n, format!("size {} clique verified", s.size));
            Ok(())
        });
    }
    for q in filter.pick(&[3, 4, 5, 7, 9, 11]) {
        c.attempt(format!("PGL set q={q}"), |c| {
            let ctx = GroupContext::build(Family::Pgl, q)?;
            let s = cons::pgl_two_intersecting(&ctx)?;
            verify_translates(&ctx, &s, 5, TRANSLATE_SEED)?;
            let want = if q % 2 == 1 { (3 * q - 5) / 2 } else { (3 * q - 4) / 2 } as usize;
            c.check(format!("PGL set q={q}"), s.size == want, format!("size {} 2-intersecting verified", s.size));
            Ok(())
        });
    }
    for (q, want) in [(5u32, 500usize), (7, 2352)] {
        if !filter.keep(q) {
            continue;
        }
        c.attempt(format!("AGL lift q={q}"), |c| {
            let pgl = GroupContext::build(Family::Pgl, q)?;
            let agl = GroupContext::build(Family::Agl, q)?;
            let s = cons::pgl_two_intersecting(&pgl)?;
            let lift = cons::agl_lift(&agl, &pgl, &s)?;
            c.check(
                format!("AGL lift q={q}"),
                lift.size == want,
                format!("size {}, verification {:?}", lift.size, lift.verification),
            );
            Ok(())
        });
    }
    for q in filter.pick(&[3, 4, 5]) {
        c.attempt(format!("line stabilizer q={q}"), |c| {
            let ctx = GroupContext::build(Family::Gl, q)?;
            let s = cons::line_stabilizer_coclique(&ctx, 0)?;
            let hits = cons::canonical_matches(&ctx, &s);
            let want = (q * (q - 1)) as usize;
            c.check(
                format!("line stabilizer q={q}"),
                s.size == want && hits == 0,
                format!("size {}, intersecting, equal to {hits} canonical sets", s.size),
            );
            Ok(())
        });
    }
}

fn gram(c: &mut Collector, filter: &QFilter) {
    for q in filter.pick(&[3, 4]) {
        c.attempt(format!("GL q={q}"), |c| {
            let ctx = GroupContext::build(Family::Gl, q)?;
            let g = ekr::gl_spanning_gram(&ctx)?;
            c.check(
                format!("GL q={q}"),
                g.rank == g.expected_rank && g.matches_stated() && g.integer_residual < 1e-6,
                format!("rank {} (want {}), spectrum {:?}", g.rank, g.expected_rank, g.observed),
            );
            Ok(())
        });
    }
    for q in filter.pick(&[3, 5, 4]) {
        c.attempt(format!("SL q={q}"), |c| {
            let ctx = GroupContext::build(Family::Sl, q)?;
            let g = ekr::sl_gram(&ctx)?;
            c.check(
                format!("SL q={q} rank"),
                g.rank == g.expected_rank && g.integer_residual < 1e-6,
                format!("rank {} (want {})", g.rank, g.expected_rank),
            );
            c.check(
                format!("SL q={q} decomposition"),
                g.decomposition_holds == Some(true),
                "agreement counts against identity plus fixing-class adjacency",
            );
            c.check(
                format!("SL q={q} stated spectrum"),
                g.matches_stated(),
                format!(
                    "observed {:?}, stated {:?} (multiplicities sum to {}), from characters {:?}",
                    g.observed,
                    g.stated,
                    g.stated.iter().map(|x| x.1).sum::<usize>(),
                    g.derived
                ),
            );
            Ok(())
        });
    }
}

/// Small instances on which reduced and unreduced searches are compared.
pub fn symmetry_instances() -> Vec<(Family, u32, Target)> {
    vec![
        (Family::Gl, 3, Target::Clique),
        (Family::Gl, 3, Target::Coclique),
        (Family::Sl, 3, Target::Clique),
        (Family::Sl, 3, Target::Coclique),
        (Family::Sl, 4, Target::Coclique),
        (Family::Sl, 5, Target::Coclique),
        (Family::Gl, 4, Target::Coclique),
        (Family::Pgl, 5, Target::TwoIntersecting),
        (Family::Psl, 7, Target::TwoIntersecting),
        (Family::Pgl, 7, Target::TwoIntersecting),
        (Family::Agl, 3, Target::Coclique),
    ]
}

fn properties(c: &mut Collector, filter: &QFilter) {
    for q in filter.pick(&[3, 4, 5, 7]) {
        c.attempt(format!("GL q={q} orthogonality"), |c| {
            let ctx = GroupContext::build(Family::Gl, q)?;
            let d = CharacterTable::gl_explicit(&ctx)?.orthogonality_defect();
            c.check(format!("GL q={q} orthogonality"), d <= 1e-9, format!("defect {d:.2e}"));
            Ok(())
        });
    }
    for fam in Family::ALL {
        for q in filter.pick(&[3, 4]) {
            c.attempt(format!("{fam} q={q} central orthogonality"), |c| {
                let ctx = GroupContext::build(fam, q)?;
                let d = CharacterTable::from_central(&ctx)?.orthogonality_defect();
                c.check(format!("{fam} q={q} central orthogonality"), d <= 1e-9, format!("defect {d:.2e}"));
                Ok(())
            });
        }
    }
    for q in filter.pick(&[2, 3, 4, 5]) {
        c.attempt(format!("GL q={q} central vs explicit"), |c| {
            let ctx = GroupContext::build(Family::Gl, q)?;
            let a = CharacterTable::gl_explicit(&ctx)?;
            let b = CharacterTable::from_central(&ctx)?;
            let d = a.row_distance(&b).max(b.row_distance(&a));
            let same = a.rows.len() == b.rows.len();
            c.check(format!("GL q={q} central vs explicit"), same && d <= 1e-8, format!("distance {d:.2e}"));
            Ok(())
        });
    }
    for q in filter.pick(&[2, 3, 4]) {
        c.attempt(format!("AGL q={q} classifier"), |c| {
            let ctx = GroupContext::build(Family::Agl, q)?;
            let mut wrong = 0;
            for g in 0..ctx.order() {
                if ctx.classify_agl_derangement(g)?.0 != ctx.is_derangement(g) {
                    wrong += 1;
                }
            }
            c.check(format!("AGL q={q} classifier"), wrong == 0, format!("{wrong} disagreements"));
            Ok(())
        });
    }
    for (fam, q, target) in symmetry_instances() {
        if !filter.keep(q) {
            continue;
        }
        let label = format!("{fam} q={q} {target:?} reduced = unreduced");
        c.attempt(label.clone(), |c| {
            let ctx = GroupContext::build(fam, q)?;
            let a = search::run(&ctx, &SearchInstance::new(&ctx, target, true)?, None, Budget::default())?;
            let b = search::run(&ctx, &SearchInstance::new(&ctx, target, false)?, None, Budget::default())?;
            c.check(
                label,
                a.proved() && b.proved() && a.size() == b.size(),
                format!("reduced {}, unreduced {}", outcome(&a), outcome(&b)),
            );
            Ok(())
        });
    }
    if filter.keep(3) {
        for fam in [Family::Gl, Family::Sl] {
            let label = format!("{fam} q=3 projection of searched coclique");
            c.attempt(label.clone(), |c| {
                let ctx = GroupContext::build(fam, 3)?;
                let table = match fam {
                    Family::Gl => CharacterTable::gl_explicit(&ctx)?,
                    _ => CharacterTable::from_central(&ctx)?,
                };
                let out = search::max_coclique(&ctx, true, Budget::default())?;
                verify(&ctx, &out.certificate)?;
                let mult = table.permutation_multiplicities(&ctx);
                let worst = table
                    .rows
                    .iter()
                    .zip(&mult)
                    .filter(|(_, m)| m.abs() < 1e-9)
                    .map(|(row, _)| ekr::module_projection(&ctx, &out.certificate, row))
                    .fold(0.0, f64::max);
                c.check(label, worst < 1e-8, format!("size {}, largest outside projection {worst:.2e}", out.size()));
                Ok(())
            });
        }
    }
}
