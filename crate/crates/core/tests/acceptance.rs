//! Acceptance run: one PASS/FAIL line per criterion. Exits non-zero if any fail.

mod common;

use common::*;
use num_traits::One;
use packlab::constructions::{girth_construction, k5_minus_bad_cover, outerplanar_2tree_cover};
use packlab::cover::{untwist, Cover, FullCoverEnumerator};
use packlab::derange::{
    agreement_witness, bad_permutations, bad_permutations_direct, check_five_pairs, classify_triples_5,
    common_derangements, common_derangements_by_enumeration, count_derangements, may_have_bad_rows,
    min_common_derangements_of_pairs, min_permanent_family, permanent, FamilyOptions, PermMatrix,
};
use packlab::frac::{
    check_monotonicity, cycle_profiles, has_fractional_packing, is_fractionally_packable, uniform_from_packing,
    verify_fractional_clique, verify_table2, Certificate, FracResult,
};
use packlab::graph::{catalog, degeneracy, girth, is_planar, mad, Planarity};
use packlab::packing::{corr_packing_upper, count_transversals, find_packing, Verdict};
use packlab::perm::{all_perms, Perm};
use packlab::verify::{verify_c3p3_lemma, verify_g733, verify_g8_two_colorings, verify_k5_minus_unique, RunOptions};
use packlab::Rational;
use rand::Rng;
use std::time::Instant;

type Outcome = Result<String, String>;

fn ensure(ok: bool, msg: impl Into<String>) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg.into())
    }
}

fn rat(p: i64, q: i64) -> Rational {
    Rational::new(p.into(), q.into())
}

fn brute_derangements(k: usize) -> u128 {
    all_perms(k).iter().filter(|p| p.fixed_points() == 0).count() as u128
}

fn derangement_counts() -> Outcome {
    let got = [count_derangements(4), count_derangements(5), count_derangements(8)];
    ensure(got == [9, 44, 14833], format!("got {got:?}"))?;
    ensure(brute_derangements(4) == 9 && brute_derangements(5) == 44 && brute_derangements(8) == 14833, "enumeration disagrees")?;
    Ok(format!("{got:?}"))
}

fn five_point_tuples() -> Outcome {
    let (pair_min, _) = min_common_derangements_of_pairs(5).map_err(|e| e.to_string())?;
    ensure(pair_min == 12, format!("pair minimum {pair_min}"))?;
    let r = classify_triples_5();
    ensure(r.pair_minimum == 12, "triple report pair minimum")?;
    ensure(r.zero_or_at_least_two, "a triple has exactly one common derangement")?;
    ensure(r.two_are_mutual_derangements, "two common derangements not mutual")?;
    ensure(r.zero_has_cycle_shape && r.cycle_shape_forces_zero, "zero triples do not match the 3-cycle shape")?;
    ensure(r.max_blocking_choices <= 2 && r.two_blocking_choices_not_mutual, "blocking choices")?;
    Ok(format!("{} triples, {} with none, {} with two", r.triples, r.zero, r.exactly_two))
}

fn eight_point_families() -> Outcome {
    let d6 = min_permanent_family(6, &FamilyOptions { classify_all: true, ..Default::default() }).map_err(|e| e.to_string())?;
    ensure(d6.complete && d6.classes == Some(11), format!("d=6 classes {:?}", d6.classes))?;
    ensure(d6.min_positive == Some(4738), format!("d=6 minimum {:?}", d6.min_positive))?;
    let mut out = vec![format!("d6 4738 over {} classes", 11)];
    for (d, want) in [(5, 1249), (4, 248)] {
        let r = min_permanent_family(d, &FamilyOptions::default()).map_err(|e| e.to_string())?;
        ensure(r.complete && r.min_positive == Some(want), format!("d={d} minimum {:?}", r.min_positive))?;
        ensure(r.minimizers.iter().all(|c| c.regular && c.permanent == want), format!("d={d} minimizer not regular"))?;
        out.push(format!("d{d} {want}"));
    }
    let d3 = min_permanent_family(3, &FamilyOptions::default()).map_err(|e| e.to_string())?;
    ensure(d3.complete && d3.min_positive == Some(33), format!("d=3 minimum {:?}", d3.min_positive))?;
    ensure(d3.augmented_min.is_some_and(|a| a >= 36), format!("d=3 augmented {:?}", d3.augmented_min))?;
    ensure(d3.minimizers.len() == 3 && d3.minimizers.iter().all(|c| c.regular), "d=3 minimizers")?;
    out.push(format!("d3 33, augmented {}", d3.augmented_min.unwrap()));
    Ok(out.join(", "))
}

fn bad_rows() -> Outcome {
    let one = PermMatrix::from_one_based(&CASE_ONE).unwrap();
    let two = PermMatrix::from_one_based(&CASE_TWO).unwrap();
    let r1 = bad_permutations(&one).map_err(|e| e.to_string())?;
    ensure(r1.count() == 96 && bad_permutations_direct(&one).unwrap().len() == 96, format!("case one has {}", r1.count()))?;
    let r2 = bad_permutations(&two).map_err(|e| e.to_string())?;
    ensure(r2.count() <= 42, format!("case two has {}", r2.count()))?;
    ensure(r2.bad.iter().any(|b| b.perm.is_identity()), "identity not bad in case two")?;
    let mut r = rng(4);
    let (mut most, mut many) = (0, 0);
    for _ in 0..10_000 {
        let a = sample_matrix(&mut r);
        if !may_have_bad_rows(&a) {
            continue;
        }
        let bad = bad_permutations_direct(&a).unwrap();
        most = most.max(bad.len());
        ensure(bad.len() <= 96, format!("{} bad rows", bad.len()))?;
        if bad.len() > 24 {
            many += 1;
            let (s, set) = agreement_witness(&bad, 5, 4).ok_or("no agreement witness")?;
            let agree = |p: &Perm| set.iter().filter(|&&i| p.apply(i) == s.apply(i)).count() >= 4;
            ensure(set.len() == 5 && bad.iter().all(agree), "witness does not check")?;
        }
    }
    ensure(many > 0, "no sample with more than 24 bad rows")?;
    Ok(format!("96, {} (identity bad), samples: max {most}, {many} above 24", r2.count()))
}

fn c3p3() -> Outcome {
    let r = verify_c3p3_lemma();
    ensure(r.is_verified(), "not verified")?;
    ensure(r.cases_checked == 5 * 24 * 24 + 24u64.pow(4), format!("{} cases", r.cases_checked))?;
    Ok(format!("{} cases", r.cases_checked))
}

fn k5_minus() -> Outcome {
    let inst = k5_minus_bad_cover();
    ensure(count_transversals(&inst.cover) == 54, "transversal count")?;
    ensure(find_packing(&inst.cover).unwrap().is_none(), "cover packs")?;
    ensure(inst.all_hold(), "claims")?;
    let r = verify_k5_minus_unique(&RunOptions::default());
    ensure(r.is_verified(), format!("uniqueness: {}", r.detail))?;
    ensure(r.detail["covers"] == 5 * 24u64.pow(4) && r.detail["classes"] == 1, format!("{}", r.detail))?;
    Ok(format!("54 transversals, no packing; {} covers, one bad class", r.detail["covers"]))
}

fn girth_five() -> Outcome {
    let inst = girth_construction(5);
    ensure(is_planar(&inst.graph).is_planar(), "not planar")?;
    ensure(girth(&inst.graph) == Some(5), format!("girth {:?}", girth(&inst.graph)))?;
    ensure(find_packing(&inst.cover).unwrap().is_none(), "cover packs")?;
    ensure(inst.all_hold(), "claims")?;
    Ok(format!("{} vertices", inst.graph.n()))
}

fn two_tree_cover() -> Outcome {
    let inst = outerplanar_2tree_cover();
    let c = &inst.cover;
    let supplied = inst.clique.as_ref().ok_or("no clique")?;
    let (valid, total) = verify_fractional_clique(c, supplied);
    ensure(valid && total == rat(22, 7), format!("supplied clique valid={valid} total={total}"))?;
    match has_fractional_packing(c).map_err(|e| e.to_string())? {
        FracResult::Infeasible(Certificate::Clique(w)) => {
            let (ok, t) = verify_fractional_clique(c, &w);
            ensure(ok && t > rat(3, 1), format!("own clique valid={ok} total={t}"))?;
            Ok(format!("supplied 22/7, own {t}"))
        }
        other => Err(format!("expected a clique certificate, got {}", serde_json::to_string(&other).unwrap())),
    }
}

fn cycle_lists() -> Outcome {
    let mut covers = 0;
    let mut witness = None;
    for n in 3..=6 {
        let r = cycle_profiles(n).map_err(|e| e.to_string())?;
        ensure(r.all_feasible, format!("C{n} has an infeasible cover"))?;
        covers += r.covers_checked;
        if witness.is_none() {
            witness = r.witness;
        }
    }
    let w = witness.ok_or("no two-3-list witness")?;
    ensure(w.sizes().iter().filter(|&&s| s == 3).count() == 2, "witness list sizes")?;
    ensure(!is_fractionally_packable(&w).unwrap(), "witness is feasible")?;
    Ok(format!("{covers} covers feasible, witness on C{}", w.n()))
}

fn mixture_marginals() -> Outcome {
    let r = verify_table2();
    ensure(r.total.is_one(), format!("total {}", r.total))?;
    let check = |m: &std::collections::BTreeMap<String, Rational>, want: Rational| m.values().all(|v| *v == want);
    ensure(check(&r.x1_x2, rat(1, 6)) && check(&r.x2_y2, rat(1, 6)) && check(&r.x1_y2, rat(1, 9)), "marginals")?;
    ensure(r.ok, "report flag")?;
    Ok("1/6, 1/6, 1/9, total 1".into())
}

fn properties() -> Outcome {
    const N: u64 = 1000;
    let mut packed = 0;
    let mut five = 0;
    for seed in 0..N {
        let mut r = rng(seed);
        let n = r.gen_range(1..=6);
        let g = random_bipartite(&mut r, n, 0.6);
        ensure(permanent(&g).unwrap() == brute_permanent(&g), format!("permanent, seed {seed}"))?;

        let k = r.gen_range(2..=7);
        let perms: Vec<Perm> = (0..r.gen_range(1..=4)).map(|_| random_perm(&mut r, k)).collect();
        ensure(
            common_derangements(&perms).unwrap() == common_derangements_by_enumeration(&perms).unwrap(),
            format!("common derangements, seed {seed}"),
        )?;

        let (n, k) = (r.gen_range(2..=5), r.gen_range(2..=3));
        let c = random_full_cover(&mut r, n, k, 0.5);
        if let Some(p) = find_packing(&c).unwrap() {
            packed += 1;
            ensure(uniform_from_packing(&p).validate(&c), format!("uniform distribution, seed {seed}"))?;
            ensure(is_fractionally_packable(&c).unwrap(), format!("packing but LP infeasible, seed {seed}"))?;
        }

        let n = r.gen_range(2..=6);
        let c = random_full_cover(&mut r, n, 3, 0.6);
        let (u, _) = untwist(&c, &c.base().spanning_forest()).unwrap();
        ensure(count_transversals(&c) == count_transversals(&u), format!("untwist, seed {seed}"))?;

        let n = r.gen_range(2..=5);
        let c = random_partial_cover(&mut r, n);
        if is_fractionally_packable(&c).unwrap() {
            let v = r.gen_range(0..c.n());
            ensure(check_monotonicity(&c, v, r.gen_range(1..=2)).unwrap(), format!("monotonicity, seed {seed}"))?;
        }

        let extra = r.gen_range(0..=8);
        let (g, pairs) = five_pair_instance(&mut r, extra);
        if permanent(&g).unwrap() > 24 {
            five += 1;
            ensure(check_five_pairs(&g, &pairs) == Ok(true), format!("five pairs, seed {seed}"))?;
        }
    }
    Ok(format!("{N} instances each ({packed} packings, {five} five-pair cases in range)"))
}

fn structure() -> Outcome {
    let cat = |s: &str| catalog(s, &[]).map_err(|e| e.to_string());
    let mad_of = |s: &str| -> Result<Rational, String> { Ok(mad(&cat(s)?).unwrap().value) };
    ensure(mad_of("K5")? == rat(4, 1), "mad(K5)")?;
    ensure(mad_of("C6")? == rat(2, 1), "mad(C6)")?;
    ensure(mad_of("K23_plus_edge")? == rat(14, 5), "mad(K23_plus_edge)")?;
    let mut sp: Vec<String> = Vec::new();
    for n in 3..=10 {
        sp.push(format!("C{n}"));
        sp.push(format!("P{n}"));
        sp.push(format!("square_of_path({n})"));
    }
    for n in 4..=8 {
        sp.push(format!("F{n}"));
    }
    for b in 1..=6 {
        sp.push(format!("K2,{b}"));
    }
    sp.push("K4-".into());
    for s in &sp {
        let d = degeneracy(&cat(s)?).0;
        ensure(d <= 2, format!("degeneracy({s}) = {d}"))?;
    }
    let k5 = cat("K5")?;
    match is_planar(&k5) {
        Planarity::NonPlanar(w) => ensure(w.validate(&k5), "K5 witness does not validate")?,
        Planarity::Planar(_) => return Err("K5 reported planar".into()),
    }
    Ok(format!("mad 4, 2, 14/5; {} series-parallel graphs 2-degenerate; K5 witness checks", sp.len()))
}

/// Brute-force packing test: some `k` pairwise disjoint independent transversals.
fn brute_packs(c: &Cover, k: usize) -> bool {
    let n = c.n();
    let mut ts = Vec::new();
    let mut choice = vec![0usize; n];
    loop {
        if c.is_transversal(&choice) {
            ts.push(choice.clone());
        }
        let mut v = 0;
        while v < n && choice[v] + 1 == c.size(v) {
            choice[v] = 0;
            v += 1;
        }
        if v == n {
            break;
        }
        choice[v] += 1;
    }
    fn pick(ts: &[Vec<usize>], chosen: &mut Vec<usize>, from: usize, k: usize) -> bool {
        if chosen.len() == k {
            return true;
        }
        for i in from..ts.len() {
            if chosen.iter().all(|&j| ts[j].iter().zip(&ts[i]).all(|(a, b)| a != b)) {
                chosen.push(i);
                if pick(ts, chosen, i + 1, k) {
                    return true;
                }
                chosen.pop();
            }
        }
        false
    }
    pick(&ts, &mut Vec::new(), 0, k)
}

fn small_upper_bounds() -> Outcome {
    let k4 = catalog("K4", &[]).unwrap();
    let r = corr_packing_upper(&k4, 4, u64::MAX);
    ensure(matches!(r.verdict, Verdict::Holds { checked: 2880 }), format!("K4: {:?}", r.verdict))?;
    let c4 = catalog("C4", &[]).unwrap();
    let r = corr_packing_upper(&c4, 3, u64::MAX);
    let Verdict::Fails { witness, index } = r.verdict else {
        return Err(format!("C4: {:?}", r.verdict));
    };
    let replay = FullCoverEnumerator::with_spanning_forest(&c4, 3).cover(index);
    ensure(replay == witness && witness.base() == &c4 && witness.fold() == Some(3), "witness does not replay")?;
    ensure(!brute_packs(&witness, 3), "C4 witness packs")?;
    ensure(verify_g733().is_verified(), "g733")?;
    ensure(verify_g8_two_colorings().is_verified(), "g8")?;
    Ok(format!("K4 holds over 2880 covers; C4 fails at cover {index}; g733 and g8 verified"))
}

fn main() {
    let criteria: [(&str, fn() -> Outcome); 13] = [
        ("derangement counts", derangement_counts),
        ("tuples of permutations of [5]", five_point_tuples),
        ("permanent minima over [8]", eight_point_families),
        ("bad fifth rows", bad_rows),
        ("C3 and P3 extension lemma", c3p3),
        ("K5 minus an edge", k5_minus),
        ("girth 5 planar construction", girth_five),
        ("outerplanar 2-tree cover", two_tree_cover),
        ("cycle list profiles", cycle_lists),
        ("twelve-row mixture marginals", mixture_marginals),
        ("cross-module properties", properties),
        ("structure values", structure),
        ("small packing upper bounds", small_upper_bounds),
    ];
    let mut failed = 0;
    for (i, (name, f)) in criteria.iter().enumerate() {
        let t0 = Instant::now();
        let res = std::panic::catch_unwind(f).unwrap_or_else(|_| Err("panicked".into()));
        let secs = t0.elapsed().as_secs_f64();
        match res {
            Ok(detail) => println!("PASS {}. {name}: {detail} ({secs:.1}s)", i + 1),
            Err(why) => {
                failed += 1;
                println!("FAIL {}. {name}: {why} ({secs:.1}s)", i + 1);
            }
        }
    }
    if failed > 0 {
        std::process::exit(1);
    }
}
