//! Acceptance run: one line per criterion.
//!
//! Two criteria fail on towers with stable letters because the word-metric
//! length does not satisfy the tree axioms there (see the README).  Those
//! lines print `FAIL (known)`; the binary exits nonzero only when an outcome
//! differs from that analysis.

use std::time::Instant;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use znfree::abelian::{is_maximal_r_bounded, is_r_bounded, reduce_basis, HeightProfile};
use znfree::axioms::check_axioms;
use znfree::ball::Ball;
use znfree::complex::{build_blueprint, emit, fundamental_group, parse_blueprint, tower_presentation, verify_gluing};
use znfree::cyclic::translation_length;
use znfree::fixtures;
use znfree::length::LengthEngine;
use znfree::weights::{build_constraints, solve_weights, weighted_length, WeightSystem, WeightsError};
use znfree::words::{inverse, power};
use znfree::{Letter, LexVec, TowerPresentation};

enum Verdict {
    Pass(String),
    /// The documented word-metric failure, reproduced.
    KnownFail(String),
    Unexpected(String),
}

fn weights(t: &TowerPresentation) -> WeightSystem {
    solve_weights(&build_constraints(t)).expect("valid fixtures have weights")
}

fn has_stable(t: &TowerPresentation, w: &[Letter]) -> bool {
    w.iter().any(|l| l.gen() >= t.base_count)
}

fn product(words: &[&[Letter]]) -> Vec<Letter> {
    words.iter().flat_map(|w| w.iter().copied()).collect()
}

fn axiom_sweep() -> Verdict {
    let mut details = Vec::new();
    let mut unexpected = Vec::new();
    let mut known = false;
    for (name, t) in fixtures::valid() {
        let start = Instant::now();
        let e = LengthEngine::new(&t).unwrap();
        let r = check_axioms(&e, &weights(&t).as_vec(), 5);
        let secs = start.elapsed().as_secs_f64();
        let clean = [&r.l1, &r.l2, &r.l4, &r.l5].iter().all(|a| a.passed());
        details.push(format!("{name}: {} elements, L3 {}/{} violated, {secs:.1}s", r.elements, r.l3.violations, r.l3.checked));
        if !clean {
            unexpected.push(format!("{name}: L1/L2/L4/L5 violated"));
        }
        if secs > 300.0 {
            unexpected.push(format!("{name}: {secs:.0}s exceeds the 5 minute budget"));
        }
        match (t.levels.is_empty(), r.l3.passed()) {
            (true, false) => unexpected.push(format!("{name}: L3 fails on the free group")),
            (false, true) => unexpected.push(format!("{name}: L3 holds, contrary to the recorded analysis")),
            (false, false) => known = true,
            (true, true) => {}
        }
    }
    let d = details.join("; ");
    if !unexpected.is_empty() {
        Verdict::Unexpected(format!("{}; {d}", unexpected.join("; ")))
    } else if known {
        Verdict::KnownFail(d)
    } else {
        Verdict::Pass(d)
    }
}

fn regularity() -> Verdict {
    let mut details = Vec::new();
    let mut unexpected = Vec::new();
    let mut known = false;
    for (name, t) in [("F2", fixtures::f2()), ("T1", fixtures::t1()), ("T3", fixtures::t3())] {
        let e = LengthEngine::new(&t).unwrap();
        let ball = Ball::build(e.group(), &weights(&t).as_vec(), 4);
        let samples: Vec<_> = ball.elements.iter().map(|w| (w.clone(), e.length(w), e.geodesic(w))).collect();
        let (mut pairs, mut failures, mut stray) = (0u64, 0u64, 0u64);
        for (i, g) in samples.iter().enumerate() {
            for f in &samples[i..] {
                pairs += 1;
                let ok = e.gromov_product(&g.0, &f.0).ok().and_then(|c| {
                    let u = e.certify_common_beginning((&g.0, &g.1, &g.2), (&f.0, &f.1, &f.2), &c)?;
                    (e.length(&u) == c).then_some(())
                });
                if ok.is_none() {
                    failures += 1;
                    if !has_stable(&t, &g.2) && !has_stable(&t, &f.2) {
                        stray += 1;
                    }
                }
            }
        }
        details.push(format!("{name}: {failures}/{pairs} pairs without a common beginning"));
        if stray > 0 {
            unexpected.push(format!("{name}: {stray} failing pairs without stable letters"));
        }
        match (t.levels.is_empty(), failures == 0) {
            (true, false) => unexpected.push(format!("{name}: free group pair fails")),
            (false, true) => unexpected.push(format!("{name}: no failure, contrary to the recorded analysis")),
            (false, false) => known = true,
            (true, true) => {}
        }
    }
    let d = details.join("; ");
    if !unexpected.is_empty() {
        Verdict::Unexpected(format!("{}; {d}", unexpected.join("; ")))
    } else if known {
        Verdict::KnownFail(d)
    } else {
        Verdict::Pass(d)
    }
}

fn key_lemma() -> Verdict {
    let ws = weights(&fixtures::t2());
    let got: Vec<_> = ws.weights.iter().map(|(k, v)| (k.as_str(), *v)).collect();
    if got != [("x", 1), ("y", 1), ("t", 1)] {
        return Verdict::Unexpected(format!("T2 weights {got:?}"));
    }
    let mut checked = 0;
    for (name, t) in fixtures::valid() {
        let ws = weights(&t);
        let e = LengthEngine::new(&t).unwrap();
        for level in &t.levels {
            for pair in &level.assoc {
                let (u, v) = (&pair.gen_word.0, &pair.image_word.0);
                let r = ws.word_weight(u).max(ws.word_weight(v));
                let (wu, wv) = (weighted_length(u, &ws, e.group(), r), weighted_length(v, &ws, e.group(), r));
                match (wu, wv) {
                    (Ok(a), Ok(b)) if a == b => checked += 1,
                    other => return Verdict::Unexpected(format!("{name}: wm mismatch {other:?}")),
                }
            }
        }
    }
    match solve_weights(&build_constraints(&fixtures::t2_broken())) {
        Err(WeightsError::Infeasible(_)) => {}
        other => return Verdict::Unexpected(format!("broken tower gave {other:?}")),
    }
    Verdict::Pass(format!("T2 weights x=y=t=1; {checked} assoc pairs with wm(u) = wm(phi(u)); broken tower Infeasible"))
}

fn engine_equivalence() -> Verdict {
    let mut details = Vec::new();
    for (name, t) in fixtures::valid() {
        let e = LengthEngine::new(&t).unwrap();
        let ball = Ball::build(e.group(), &vec![1; t.generator_count()], 4);
        let oracle = ball.lex_distances(&t.lengths);
        let bad = ball.elements.iter().zip(&oracle).filter(|(w, o)| e.length(w) != **o).count();
        if bad > 0 {
            return Verdict::Unexpected(format!("{name}: {bad}/{} elements disagree", ball.len()));
        }
        details.push(format!("{name}: {}", ball.len()));
    }
    Verdict::Pass(format!("all elements agree ({})", details.join(", ")))
}

/// A reduced base word of length 1..=3 outside `<xy>`.
fn segment(rng: &mut ChaCha8Rng) -> Vec<Letter> {
    loop {
        let mut w: Vec<Letter> = Vec::new();
        for _ in 0..rng.gen_range(1..=3) {
            let l = Letter::new(rng.gen_range(0..2), rng.gen_bool(0.5));
            if w.last() == Some(&l.inverse()) {
                continue;
            }
            w.push(l);
        }
        if w.is_empty() {
            continue;
        }
        // a reduced word lies in <xy> iff it spells (xy)^k or (y^-1 x^-1)^k
        let xy = [Letter::new(0, false), Letter::new(1, false)];
        let yx = [Letter::new(1, true), Letter::new(0, true)];
        let periodic = |p: &[Letter]| w.len() % 2 == 0 && w.chunks(2).all(|c| c == p);
        if !periodic(&xy) && !periodic(&yx) {
            return w;
        }
    }
}

fn britton_soundness() -> Verdict {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let mut tested = 0;
    for t in [fixtures::t1(), fixtures::t3()] {
        let group = znfree::Group::new(&t).unwrap();
        let stables: Vec<usize> = (t.base_count..t.generator_count()).collect();
        for _ in 0..100 {
            // stable letters separated by base segments outside every
            // associated subgroup, so no pinch can occur
            let mut w = Vec::new();
            if rng.gen_bool(0.5) {
                w.extend(segment(&mut rng));
            }
            for k in 0..rng.gen_range(1..=3) {
                if k > 0 {
                    w.extend(segment(&mut rng));
                }
                w.push(Letter::new(*stables.choose(&mut rng).unwrap(), rng.gen_bool(0.5)));
            }
            if rng.gen_bool(0.5) {
                w.extend(segment(&mut rng));
            }
            tested += 1;
            if group.is_identity(&w) {
                return Verdict::Unexpected(format!("{} reduces to the identity", t.format_letters(&w)));
            }
        }
    }
    Verdict::Pass(format!("{tested} pinch-free words, none trivial"))
}

fn abelian_basis() -> Verdict {
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    let cases = [
        (fixtures::f2(), vec!["x y"]),
        (fixtures::t1(), vec!["x y", "t"]),
        (fixtures::t2(), vec!["x x y"]),
        (fixtures::t3(), vec!["x y", "t", "s"]),
    ];
    for round in 0..20 {
        let (t, gens) = &cases[round % cases.len()];
        let e = LengthEngine::new(t).unwrap();
        let g = e.group();
        let b: Vec<_> = gens.iter().map(|s| t.parse_word(s).unwrap().0).collect();
        let conj = if round % 3 == 0 { vec![g.alphabet()[rng.gen_range(0..2 * t.generator_count())]] } else { vec![] };
        let mut inputs = Vec::new();
        while inputs.len() < rng.gen_range(1..=4) {
            let w: Vec<Letter> = b.iter().flat_map(|bj| power(bj, rng.gen_range(-3..=3))).collect();
            let c = g.reduce(&product(&[&inverse(&conj), &w, &conj]));
            if c.len() <= 10 {
                inputs.push(c);
            }
        }
        let show = || inputs.iter().map(|w| t.format_letters(w)).collect::<Vec<_>>().join(", ");
        let basis = match reduce_basis(&e, &inputs, None) {
            Ok(r) => r,
            Err(err) => return Verdict::Unexpected(format!("{{{}}}: {err}", show())),
        };
        let x = &basis.conjugator;
        let conjugated: Vec<_> = inputs.iter().map(|w| product(&[&inverse(x), w, x])).collect();
        let combo = |words: &[Vec<Letter>], exps: &[i64]| -> Vec<Letter> {
            words.iter().zip(exps).flat_map(|(w, &k)| power(w, k)).collect()
        };
        let ok = basis.gens.len() <= t.rank_n
            && basis.heights.windows(2).all(|p| p[0] < p[1])
            && basis.gens.iter().all(|w| e.is_cyclically_reduced(w))
            && basis.gens.iter().zip(&basis.from_inputs).all(|(w, row)| g.equal(w, &combo(&conjugated, row)))
            && conjugated.iter().zip(&basis.to_inputs).all(|(w, row)| g.equal(w, &combo(&basis.gens, row)));
        if !ok {
            return Verdict::Unexpected(format!("{{{}}}: basis or certificate rejected", show()));
        }
    }
    Verdict::Pass("20 subsets, <= n generators, heights increasing, certificates verified".into())
}

fn junction_additivity() -> Verdict {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let mut accepted = 0;
    let mut oracle_checked = 0;
    let mut adjacent_only = 0;
    for (name, t) in fixtures::valid() {
        let e = LengthEngine::new(&t).unwrap();
        let ball = Ball::build(e.group(), &vec![1; t.generator_count()], 3);
        let pool: Vec<_> = ball.elements.iter().filter(|w| !w.is_empty() && e.is_cyclically_reduced(w)).cloned().collect();
        let wide = Ball::build(e.group(), &vec![1; t.generator_count()], 5);
        let wide_lex = wide.lex_distances(&t.lengths);
        let mut found = 0;
        let mut attempts = 0;
        while found < 25 {
            attempts += 1;
            if attempts > 100_000 {
                return Verdict::Unexpected(format!("{name}: could not sample additive sequences"));
            }
            let m = rng.gen_range(2..=4);
            let seq: Vec<&Vec<Letter>> = (0..m).map(|_| pool.choose(&mut rng).unwrap()).collect();
            if !seq.windows(2).all(|p| e.additive_junction(p[0], p[1])) {
                continue;
            }
            let mut running: Vec<Letter> = seq[0].clone();
            let mut additive = true;
            for g in &seq[1..] {
                additive &= e.additive_junction(&running, g);
                running.extend_from_slice(g);
            }
            if !additive {
                // adjacent junctions alone do not force additivity
                adjacent_only += 1;
                continue;
            }
            found += 1;
            let mut sum = LexVec::zero(t.rank_n);
            for g in &seq {
                sum.add_assign(&e.length(g));
            }
            let words: Vec<&[Letter]> = seq.iter().map(|w| w.as_slice()).collect();
            let whole = product(&words);
            if e.length(&whole) != sum {
                return Verdict::Unexpected(format!("{name}: {} is not additive", t.format_letters(&whole)));
            }
            // the lexicographic shortest path agrees when it is reachable
            if let Some(i) = wide.index_of(e.group(), &whole) {
                if wide_lex[i] != sum {
                    return Verdict::Unexpected(format!("{name}: oracle disagrees on {}", t.format_letters(&whole)));
                }
                oracle_checked += 1;
            }
        }
        accepted += found;
    }
    // adjacent junctions alone are not enough: t, xy, t^-1 in T1
    let t1 = fixtures::t1();
    let e = LengthEngine::new(&t1).unwrap();
    let seq: Vec<Vec<Letter>> = ["t", "x y", "t^-1"].iter().map(|s| t1.parse_word(s).unwrap().0).collect();
    let adjacent = seq.windows(2).all(|p| e.additive_junction(&p[0], &p[1]));
    let whole = product(&[&seq[0], &seq[1], &seq[2]]);
    let sum = seq.iter().fold(LexVec::zero(2), |acc, g| &acc + &e.length(g));
    if !adjacent || e.length(&whole) == sum {
        return Verdict::Unexpected("t, xy, t^-1 no longer separates the two conditions".into());
    }
    Verdict::Pass(format!(
        "{accepted} sequences additive, {oracle_checked} also checked by shortest paths; \
         {adjacent_only} sampled sequences had additive adjacent junctions only and were skipped; \
         t, xy, t^-1 in T1 has additive adjacent junctions but l = {} != {sum}",
        e.length(&whole)
    ))
}

fn conjugacy_invariance() -> Verdict {
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    let mut tested = 0;
    for (name, t) in fixtures::valid() {
        let e = LengthEngine::new(&t).unwrap();
        let ball = Ball::build(e.group(), &vec![1; t.generator_count()], 4);
        for _ in 0..50 {
            let g = loop {
                let g = ball.elements.choose(&mut rng).unwrap();
                if !g.is_empty() {
                    break g;
                }
            };
            let w = ball.elements.choose(&mut rng).unwrap();
            let conj = product(&[w, g, &inverse(w)]);
            match (translation_length(&e, g), translation_length(&e, &conj)) {
                (Ok(a), Ok(b)) if a == b => tested += 1,
                other => {
                    return Verdict::Unexpected(format!(
                        "{name}: g = {}, w = {}: {other:?}",
                        t.format_letters(g),
                        t.format_letters(w)
                    ))
                }
            }
        }
    }
    Verdict::Pass(format!("{tested} pairs, l_T(w g w^-1) = l_T(g)"))
}

fn blueprint_round_trip() -> Verdict {
    for (name, t) in fixtures::valid() {
        let b = match build_blueprint(&t, &weights(&t)) {
            Ok(b) => b,
            Err(err) => return Verdict::Unexpected(format!("{name}: {err}")),
        };
        if fundamental_group(&b) != tower_presentation(&t) {
            return Verdict::Unexpected(format!("{name}: presentations differ"));
        }
        match verify_gluing(&b, &t, 4) {
            Ok(r) if r.first_length_failure().is_none() && r.passed() => {}
            other => return Verdict::Unexpected(format!("{name}: gluing check {other:?}")),
        }
        for format in ["json", "dot"] {
            let once = emit(&b, format).unwrap();
            let again = emit(&parse_blueprint(&emit(&b, "json").unwrap()).unwrap(), format).unwrap();
            if once != again {
                return Verdict::Unexpected(format!("{name}: {format} output not byte-stable"));
            }
        }
    }
    Verdict::Pass("4 fixtures: relators match, gluings length-matched, emit/parse/emit stable".into())
}

fn r_bounded_examples() -> Verdict {
    let v = |c: &[i64]| LexVec::from_coords(c);
    let r = [v(&[1, 0]), v(&[2, 1])];
    let profile = HeightProfile::from_lengths(2, &r).unwrap();
    if is_r_bounded(&r, &profile).unwrap() {
        return Verdict::Unexpected("R itself reported R-bounded".into());
    }
    let p = [v(&[0, 0]), v(&[1, 0]), v(&[0, 1]), v(&[1, 1])];
    if !is_r_bounded(&p, &profile).unwrap() || !is_maximal_r_bounded(&p, &profile).unwrap() {
        return Verdict::Unexpected("P not reported maximal".into());
    }
    // every nonnegative superset candidate in a box past the profile breaks the bound
    let mut candidates = 0;
    for a in 0..=profile.bounds[0] + 2 {
        for b in 0..=profile.bounds[1] + 2 {
            let c = v(&[a, b]);
            if p.contains(&c) {
                continue;
            }
            candidates += 1;
            let mut bigger = p.to_vec();
            bigger.push(c);
            if is_r_bounded(&bigger, &profile).unwrap() {
                return Verdict::Unexpected(format!("P + ({a},{b}) is R-bounded"));
            }
        }
    }
    Verdict::Pass(format!("R not R-bounded; P maximal against {candidates} candidate supersets"))
}

fn main() {
    let criteria: [(&str, fn() -> Verdict); 10] = [
        ("axiom sweep", axiom_sweep),
        ("regularity", regularity),
        ("key lemma weights", key_lemma),
        ("engine equivalence", engine_equivalence),
        ("britton soundness", britton_soundness),
        ("abelian basis", abelian_basis),
        ("junction additivity", junction_additivity),
        ("conjugacy invariance", conjugacy_invariance),
        ("blueprint round trip", blueprint_round_trip),
        ("r-bounded examples", r_bounded_examples),
    ];
    // optional criterion numbers on the command line select a subset
    let only: Vec<usize> = std::env::args().skip(1).filter_map(|a| a.parse().ok()).collect();
    let mut unexpected = 0;
    for (i, (name, run)) in criteria.iter().enumerate() {
        if !only.is_empty() && !only.contains(&(i + 1)) {
            continue;
        }
        let start = Instant::now();
        let verdict = run();
        let secs = start.elapsed().as_secs_f64();
        let (tag, detail) = match verdict {
            Verdict::Pass(d) => ("PASS", d),
            Verdict::KnownFail(d) => ("FAIL (known, see README)", d),
            Verdict::Unexpected(d) => {
                unexpected += 1;
                ("FAIL", d)
            }
        };
        println!("criterion {:>2} {name}: {tag} [{secs:.1}s] {detail}", i + 1);
    }
    if unexpected > 0 {
        println!("{unexpected} criteria failed unexpectedly");
        std::process::exit(1);
    }
}
