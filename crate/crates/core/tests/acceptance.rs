//! Acceptance suite: one PASS/FAIL line per criterion.

mod common;

use std::panic::{catch_unwind, AssertUnwindSafe};
use std::time::{Duration, Instant};

use num_rational::BigRational;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use common::{ensemble, truths, Truth};
use popmatch::elections::{compare, defeats, label_edges, ElectionResult};
use popmatch::gale_shapley::{find_blocking_pair, is_stable};
use popmatch::instance::generate_random;
use popmatch::level_graph::{
    build_level_graph, dominant_via_level_graph, f_values, inverse_map, map_T,
};
use popmatch::min_cost::{min_cost_dominant, CostFunction};
use popmatch::oracles::{self, all_stable_matchings};
use popmatch::popular_edge::{decompose, lift_to_dominant, lower_to_stable, popular_edge, Branch};
use popmatch::unstable_popular::{exists_unstable_popular, exists_unstable_popular_cubic};
use popmatch::verify::{is_dominant, is_popular};
use popmatch::{fixtures, Instance, Matching};

type Outcome = Result<String, String>;
type Criterion<'a> = (&'static str, Box<dyn Fn() -> Outcome + 'a>);

macro_rules! ensure {
    ($cond:expr, $($fmt:tt)+) => {
        if !$cond {
            return Err(format!($($fmt)+));
        }
    };
}

fn mm(inst: &Instance, pairs: &[(&str, &str)]) -> Matching {
    Matching::from_ids(inst, pairs).unwrap()
}

/// Runs `check` on every truth in parallel and reports the first failure in
/// ensemble order.
fn each(
    ts: &[Truth],
    check: impl Fn(usize, &Truth) -> Result<usize, String> + Sync,
) -> Result<usize, String> {
    let results: Vec<Result<usize, String>> = ts
        .par_iter()
        .enumerate()
        .map(|(i, t)| check(i, t))
        .collect();
    let mut total = 0;
    for r in results {
        total += r?;
    }
    Ok(total)
}

fn fixtures_exact() -> Outcome {
    let f1 = fixtures::fig1();
    let s = mm(&f1, &[("a1", "b1")]);
    let p = mm(&f1, &[("a1", "b2"), ("a2", "b1")]);
    ensure!(
        oracles::stable_set(&f1).unwrap().into_vec() == vec![s.clone()],
        "fig1 stable set"
    );
    let mut pop = vec![s, p];
    pop.sort();
    ensure!(
        oracles::popular_set(&f1).unwrap().into_vec() == pop,
        "fig1 popular set"
    );
    ensure!(
        oracles::popular_edges(&f1).unwrap().len() == 3,
        "fig1 popular edges"
    );
    for e in f1.edges() {
        ensure!(
            popular_edge(&f1, e).unwrap().is_some(),
            "fig1 popular_edge {}",
            f1.edge_label(e)
        );
    }

    let f2 = fixtures::fig2();
    ensure!(
        !is_popular(&f2, &mm(&f2, &[("a1", "b1"), ("a2", "b2")])).holds,
        "fig2 unpopular"
    );
    ensure!(
        is_popular(&f2, &mm(&f2, &[("a1", "b3"), ("a2", "b2"), ("a3", "b1")])).holds,
        "fig2 popular"
    );
    let e = f2.edge_by_ids("a2", "b2").unwrap();
    let w = popular_edge(&f2, e).unwrap();
    ensure!(
        w.as_ref().is_some_and(|(m, _)| m.contains(e)),
        "fig2 popular_edge (a2,b2)"
    );

    let f3 = fixtures::fig3();
    let m1 = mm(&f3, &[("a1", "b1"), ("a2", "b2")]);
    let m2 = mm(&f3, &[("a1", "b2"), ("a2", "b1")]);
    let m3 = mm(&f3, &[("a1", "b3"), ("a2", "b2"), ("a3", "b1")]);
    ensure!(defeats(&f3, &m3, &m1), "fig3 M3 defeats M1");
    ensure!(!is_dominant(&f3, &m1).holds, "fig3 M1 not dominant");
    ensure!(is_dominant(&f3, &m2).holds, "fig3 M2 dominant");
    ensure!(
        compare(&f3, &m2, &m3)
            == ElectionResult {
                for_first: 4,
                for_second: 2
            },
        "fig3 compare(M2,M3)"
    );
    Ok("fig1, fig2 and fig3 reproduce exactly".into())
}

fn oracle_equivalence(ts: &[Truth]) -> Outcome {
    let checked = each(ts, |i, t| {
        let inst = &t.inst;
        for m in &t.all {
            let p = is_popular(inst, m);
            let d = is_dominant(inst, m);
            let s = is_stable(inst, m);
            ensure!(
                p.holds == t.popular.contains(m),
                "instance {i}: popular verdict on {}",
                m.display(inst)
            );
            ensure!(
                d.holds == t.dominant.contains(m),
                "instance {i}: dominant verdict on {}",
                m.display(inst)
            );
            ensure!(
                s.holds == t.stable.contains(m),
                "instance {i}: stable verdict on {}",
                m.display(inst)
            );
            for c in [p.certificate, d.certificate, s.certificate]
                .iter()
                .flatten()
            {
                c.replay(inst, m)
                    .map_err(|e| format!("instance {i}: certificate replay: {e}"))?;
            }
        }
        Ok(t.all.len())
    })?;
    Ok(format!("{} instances, {checked} matchings agree", ts.len()))
}

fn popular_edge_completeness(ts: &[Truth]) -> Outcome {
    let probes = each(ts, |i, t| {
        let inst = &t.inst;
        let truth = t.popular_edges();
        for e in inst.edges() {
            let got = popular_edge(inst, e).unwrap();
            ensure!(
                got.is_some() == truth.contains(&e),
                "instance {i}: edge {}",
                inst.edge_label(e)
            );
            if let Some((m, branch)) = got {
                ensure!(m.contains(e), "instance {i}: witness misses edge");
                let ok = match branch {
                    Branch::Stable => t.stable.contains(&m),
                    Branch::Dominant => t.dominant.contains(&m),
                };
                ensure!(
                    ok,
                    "instance {i}: witness for {} fails its branch",
                    inst.edge_label(e)
                );
            }
        }
        Ok(inst.num_edges())
    })?;
    Ok(format!("{probes} edge probes, zero mismatches"))
}

fn surjectivity(ts: &[Truth]) -> Outcome {
    let counts = each(ts, |i, t| {
        let inst = &t.inst;
        let level = build_level_graph(inst);
        for m in &t.dominant {
            let mp =
                inverse_map(&level, m).map_err(|e| format!("instance {i}: inverse_map: {e}"))?;
            ensure!(
                find_blocking_pair(&level.graph, &mp).is_none(),
                "instance {i}: inverse not stable"
            );
            ensure!(
                map_T(&level, &mp).unwrap() == *m,
                "instance {i}: round trip"
            );
        }
        let stable_level = all_stable_matchings(&level.graph);
        for mp in &stable_level {
            let m = map_T(&level, mp).map_err(|e| format!("instance {i}: {e}"))?;
            ensure!(
                t.dominant.contains(&m),
                "instance {i}: T image not dominant"
            );
            for a in inst.men() {
                let d = level.dummy(a);
                let held = [0, 1]
                    .iter()
                    .filter(|&&l| mp.contains((level.copy(a, l), d)))
                    .count();
                ensure!(
                    held == 1,
                    "instance {i}: dummy of {} held {held} times",
                    inst.man_id(a)
                );
            }
            let f = f_values(&level, mp);
            let g = label_edges(inst, &m);
            for &(e, l) in g.labels() {
                if l.is_plus_plus() {
                    ensure!(
                        f.men[e.0 .0] == 0 && f.women[e.1 .0] == 1,
                        "instance {i}: (+,+) edge levels"
                    );
                }
                if f.men[e.0 .0] == 1 && f.women[e.1 .0] == 0 {
                    ensure!(l.is_minus_minus(), "instance {i}: level 1-0 edge not (-,-)");
                }
            }
        }
        Ok(t.dominant.len() + stable_level.len())
    })?;
    Ok(format!(
        "{counts} dominant / level-stable matchings round-trip"
    ))
}

fn decomposition(ts: &[Truth]) -> Outcome {
    let checked = each(ts, |i, t| {
        let inst = &t.inst;
        for m in &t.popular {
            let d = decompose(inst, m).map_err(|e| format!("instance {i}: {e}"))?;
            let p = &d.partition;
            ensure!(p.overlap().is_empty(), "instance {i}: A0 and A1 overlap");
            let mut union: Vec<_> = d.m0.pairs().chain(d.m1.pairs()).collect();
            union.sort();
            ensure!(union == m.to_vec(), "instance {i}: M0 + M1 != M");
            ensure!(
                d.a_prime.iter().all(|&a| d.m0.partner_of_man(a).is_some())
                    && d.b_prime
                        .iter()
                        .all(|&b| d.m0.partner_of_woman(b).is_some()),
                "instance {i}: M0 does not cover A' and B'"
            );
            let g = label_edges(inst, m);
            let in_y = |a| !(p.in_a0(a) || p.in_a1(a));
            let in_z = |b| !(p.in_b0(b) || p.in_b1(b));
            for &(e, l) in g.labels() {
                let (a, b) = e;
                if !l.is_minus_minus() {
                    ensure!(!(p.in_a1(a) && in_z(b)), "instance {i}: G_M edge in A1 x Z");
                    ensure!(!(in_y(a) && p.in_b0(b)), "instance {i}: G_M edge in Y x B0");
                }
                if l.is_plus_plus() {
                    ensure!(
                        p.in_a0(a) && p.in_b1(b),
                        "instance {i}: (+,+) edge outside A0 x B1"
                    );
                }
                if p.in_a1(a) && p.in_b0(b) {
                    ensure!(l.is_minus_minus(), "instance {i}: A1 x B0 edge not (-,-)");
                }
            }
            let top = inst.induced(&d.a_prime, &d.b_prime);
            ensure!(
                is_dominant(&top.instance, &top.restrict(&d.m0)).holds,
                "instance {i}: M0 not dominant"
            );
            let rest = inst.induced(&d.y, &d.z);
            ensure!(
                is_stable(&rest.instance, &rest.restrict(&d.m1)).holds,
                "instance {i}: M1 not stable"
            );

            let up = lift_to_dominant(inst, m).map_err(|e| format!("instance {i}: {e}"))?;
            ensure!(t.dominant.contains(&up), "instance {i}: lift not dominant");
            ensure!(
                d.m0.pairs().all(|e| up.contains(e)),
                "instance {i}: lift drops M0"
            );
            let down = lower_to_stable(inst, m).map_err(|e| format!("instance {i}: {e}"))?;
            ensure!(t.stable.contains(&down), "instance {i}: lower not stable");
            ensure!(
                d.m1.pairs().all(|e| down.contains(e)),
                "instance {i}: lower drops M1"
            );
        }
        Ok(t.popular.len())
    })?;
    Ok(format!(
        "{checked} popular matchings decomposed, lifted and lowered"
    ))
}

fn unstable_popular(ts: &[Truth]) -> Outcome {
    let witnesses = each(ts, |i, t| {
        let inst = &t.inst;
        let expect = t.popular.len() > t.stable.len();
        let unstable_dominant = t.dominant.iter().any(|m| !t.stable.contains(m));
        ensure!(
            expect == unstable_dominant,
            "instance {i}: unstable popular iff unstable dominant fails"
        );
        let fast = exists_unstable_popular(inst);
        let slow = exists_unstable_popular_cubic(inst);
        ensure!(
            fast.is_some() == expect,
            "instance {i}: per-edge route says {}",
            fast.is_some()
        );
        ensure!(
            slow.is_some() == expect,
            "instance {i}: pairwise route says {}",
            slow.is_some()
        );
        for (m, (a, b)) in fast.iter().chain(slow.iter()) {
            ensure!(t.dominant.contains(m), "instance {i}: witness not dominant");
            ensure!(!t.stable.contains(m), "instance {i}: witness stable");
            ensure!(
                inst.man_prefers(*a, *b, m.partner_of_man(*a))
                    && inst.woman_prefers(*b, *a, m.partner_of_woman(*b)),
                "instance {i}: reported pair does not block"
            );
        }
        Ok(usize::from(expect))
    })?;
    Ok(format!(
        "{witnesses} of {} instances have unstable popular matchings; routes agree",
        ts.len()
    ))
}

fn random_costs(inst: &Instance, seed: u64) -> CostFunction {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    CostFunction::from_fn(inst, |_| {
        let n: i64 = rng.gen_range(-20..=40);
        let d: i64 = rng.gen_range(1..=4);
        BigRational::new(n.into(), d.into())
    })
}

fn min_cost(ts: &[Truth]) -> Outcome {
    let costed: Vec<&Truth> = ts.iter().take(150).collect();
    let results: Vec<Result<(), String>> = costed
        .par_iter()
        .enumerate()
        .map(|(i, t)| {
            let c = random_costs(&t.inst, 500 + i as u64);
            let (m, cost) =
                min_cost_dominant(&t.inst, &c).map_err(|e| format!("instance {i}: {e}"))?;
            let best = t
                .dominant
                .iter()
                .map(|d| c.cost_of(&t.inst, d).unwrap())
                .min()
                .unwrap();
            ensure!(t.dominant.contains(&m), "instance {i}: result not dominant");
            ensure!(
                cost == c.cost_of(&t.inst, &m).unwrap(),
                "instance {i}: reported cost inexact"
            );
            ensure!(cost == best, "instance {i}: cost {cost} but optimum {best}");
            Ok(())
        })
        .collect();
    for r in results {
        r?;
    }
    Ok(format!(
        "{} costed instances hit the exact optimum",
        costed.len()
    ))
}

fn size_relations(ts: &[Truth]) -> Outcome {
    each(ts, |i, t| {
        let sizes: Vec<usize> = t.popular.iter().map(Matching::len).collect();
        let (lo, hi) = (*sizes.iter().min().unwrap(), *sizes.iter().max().unwrap());
        ensure!(
            t.stable.iter().all(|m| m.len() == lo),
            "instance {i}: stable size != min popular"
        );
        ensure!(
            t.dominant.iter().all(|m| m.len() == hi),
            "instance {i}: dominant size != max popular"
        );
        let mmax = oracles::maximum_matching_size(&t.inst);
        ensure!(
            3 * hi >= 2 * mmax,
            "instance {i}: max popular {hi} < 2/3 of {mmax}"
        );
        Ok(0)
    })?;
    Ok(format!("{} instances satisfy size relations", ts.len()))
}

fn scalability() -> Outcome {
    let inst = generate_random(10_000, 10_000, 0.002, 2024).unwrap();
    ensure!(
        (190_000..=210_000).contains(&inst.num_edges()),
        "generated {} edges",
        inst.num_edges()
    );
    let limit = Duration::from_secs(5);

    let t0 = Instant::now();
    let d = dominant_via_level_graph(&inst);
    let t_dom = t0.elapsed();
    ensure!(t_dom < limit, "dominant_via_level_graph took {t_dom:?}");

    // the least preferred partner of the last man is rarely stable, so this
    // usually exercises the level-graph branch as well
    let a = inst.men().last().unwrap();
    let e = (a, *inst.man_prefs(a).last().unwrap());
    let t1 = Instant::now();
    let w = popular_edge(&inst, e).unwrap();
    let t_edge = t1.elapsed();
    ensure!(t_edge < limit, "popular_edge took {t_edge:?}");
    if let Some((m, _)) = &w {
        ensure!(m.contains(e), "witness misses edge");
    }
    Ok(format!(
        "{} edges: dominant {} pairs in {:.2}s, popular_edge {} in {:.2}s",
        inst.num_edges(),
        d.len(),
        t_dom.as_secs_f64(),
        if w.is_some() { "found" } else { "absent" },
        t_edge.as_secs_f64()
    ))
}

fn main() {
    let t0 = Instant::now();
    let ts = truths(ensemble());
    println!(
        "ensemble: {} instances, oracles in {:.1}s",
        ts.len(),
        t0.elapsed().as_secs_f64()
    );

    let criteria: Vec<Criterion> = vec![
        ("1 fixture regressions", Box::new(fixtures_exact)),
        ("2 oracle equivalence", Box::new(|| oracle_equivalence(&ts))),
        (
            "3 popular-edge completeness",
            Box::new(|| popular_edge_completeness(&ts)),
        ),
        ("4 surjectivity of T", Box::new(|| surjectivity(&ts))),
        ("5 decomposition", Box::new(|| decomposition(&ts))),
        (
            "6 unstable popular detection",
            Box::new(|| unstable_popular(&ts)),
        ),
        ("7 min-cost dominant", Box::new(|| min_cost(&ts))),
        ("8 size relations", Box::new(|| size_relations(&ts))),
        ("9 scalability", Box::new(scalability)),
    ];
    let mut failed = 0;
    for (name, run) in &criteria {
        let start = Instant::now();
        let outcome = catch_unwind(AssertUnwindSafe(run)).unwrap_or_else(|p| {
            let msg = p
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| p.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_default();
            Err(format!("panicked: {msg}"))
        });
        let secs = start.elapsed().as_secs_f64();
        match outcome {
            Ok(detail) => println!("PASS criterion {name} ({secs:.1}s): {detail}"),
            Err(why) => {
                failed += 1;
                println!("FAIL criterion {name} ({secs:.1}s): {why}");
            }
        }
    }
    if failed > 0 {
        std::process::exit(1);
    }
}
