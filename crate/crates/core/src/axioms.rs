//! Exhaustive checks of the length-function axioms over a ball.
//!
//! * L1: `l(g) >= 0`, `l(1) = 0`
//! * L2: `l(g) = l(g^-1)`
//! * L3: `c(g,f) > c(g,h)` implies `c(g,h) = c(f,h)`
//! * L4: `c(g,f)` lies in `Z^n` (the doubled product is even)
//! * L5: `l(g^2) > l(g)` for `g != 1`
//! * L6: `com(g,f)` exists
//!
//! Single-element axioms run over the whole ball of radius `r`, pair
//! axioms over the ball of radius `r - 1` and the triple axiom over the
//! ball of radius `ceil(r / 2)`.

use serde::Serialize;

use crate::ball::Ball;
use crate::length::LengthEngine;
use crate::lexvec::LexVec;
use crate::words::{inverse, Letter};

#[derive(Debug, Clone, Default, Serialize, PartialEq, Eq)]
pub struct AxiomResult {
    pub checked: u64,
    pub violations: u64,
    pub first_counterexample: Option<String>,
}

impl AxiomResult {
    fn record(&mut self, ok: bool, describe: impl FnOnce() -> String) {
        self.checked += 1;
        if !ok {
            self.violations += 1;
            if self.first_counterexample.is_none() {
                self.first_counterexample = Some(describe());
            }
        }
    }

    pub fn passed(&self) -> bool {
        self.violations == 0
    }
}

#[derive(Debug, Clone, Serialize, PartialEq, Eq)]
pub struct AxiomReport {
    pub radius: u64,
    pub weights: Vec<u64>,
    pub element_radius: u64,
    pub pair_radius: u64,
    pub triple_radius: u64,
    pub elements: usize,
    pub pair_elements: usize,
    pub triple_elements: usize,
    #[serde(rename = "L1")]
    pub l1: AxiomResult,
    #[serde(rename = "L2")]
    pub l2: AxiomResult,
    #[serde(rename = "L3")]
    pub l3: AxiomResult,
    #[serde(rename = "L4")]
    pub l4: AxiomResult,
    #[serde(rename = "L5")]
    pub l5: AxiomResult,
    #[serde(rename = "L6")]
    pub l6: AxiomResult,
}

impl AxiomReport {
    /// Whether L1 through L5 hold on the checked ball.
    pub fn free_axioms_hold(&self) -> bool {
        [&self.l1, &self.l2, &self.l3, &self.l4, &self.l5].iter().all(|a| a.passed())
    }

    pub fn all_hold(&self) -> bool {
        self.free_axioms_hold() && self.l6.passed()
    }
}

struct Sample {
    word: Vec<Letter>,
    length: LexVec,
    geodesic: Vec<Letter>,
}

pub fn check_axioms(engine: &LengthEngine, weights: &[u64], radius: u64) -> AxiomReport {
    let tower = engine.tower();
    let group = engine.group();
    let ball = Ball::build(group, weights, radius);
    let pair_radius = radius.saturating_sub(1);
    let triple_radius = radius.div_ceil(2);
    let fmt = |w: &[Letter]| {
        let s = tower.format_letters(w);
        if s.is_empty() {
            "1".to_string()
        } else {
            s
        }
    };
    let n = engine.rank();
    let zero = LexVec::zero(n);

    let samples: Vec<Sample> = ball
        .elements
        .iter()
        .map(|w| Sample { word: w.clone(), length: engine.length(w), geodesic: engine.geodesic(w) })
        .collect();

    let (mut l1, mut l2, mut l5) = (AxiomResult::default(), AxiomResult::default(), AxiomResult::default());
    for s in &samples {
        let ok1 = s.length >= zero && (!s.word.is_empty() || s.length == zero);
        l1.record(ok1, || format!("g={}: l(g)={}", fmt(&s.word), s.length));
        let li = engine.length(&inverse(&s.word));
        l2.record(li == s.length, || format!("g={}: l(g)={} l(g^-1)={}", fmt(&s.word), s.length, li));
        if !s.word.is_empty() {
            let mut sq = s.word.clone();
            sq.extend_from_slice(&s.word);
            let l_sq = engine.length(&sq);
            l5.record(l_sq > s.length, || format!("g={}: l(g)={} l(g^2)={}", fmt(&s.word), s.length, l_sq));
        }
    }

    let pair_ids = ball.within(pair_radius);
    let (mut l4, mut l6) = (AxiomResult::default(), AxiomResult::default());
    for (i, &a) in pair_ids.iter().enumerate() {
        for &b in &pair_ids[i..] {
            let (g, f) = (&samples[a], &samples[b]);
            let mut gf = inverse(&g.word);
            gf.extend_from_slice(&f.word);
            let doubled = &(&g.length + &f.length) - &engine.length(&gf);
            let half = doubled.halve();
            l4.record(half.is_ok(), || format!("g={}, f={}: 2c={}", fmt(&g.word), fmt(&f.word), doubled));
            let Ok(c) = half else { continue };
            let found = engine.certify_common_beginning(
                (&g.word, &g.length, &g.geodesic),
                (&f.word, &f.length, &f.geodesic),
                &c,
            );
            l6.record(found.is_some(), || format!("g={}, f={}: c={}", fmt(&g.word), fmt(&f.word), c));
        }
    }

    // L3 on doubled products, which avoids halving
    let triple_ids = ball.within(triple_radius);
    let k = triple_ids.len();
    let mut dc = vec![zero.clone(); k * k];
    for i in 0..k {
        for j in i..k {
            let (g, f) = (&samples[triple_ids[i]], &samples[triple_ids[j]]);
            let mut gf = inverse(&g.word);
            gf.extend_from_slice(&f.word);
            let v = &(&g.length + &f.length) - &engine.length(&gf);
            dc[i * k + j] = v.clone();
            dc[j * k + i] = v;
        }
    }
    let mut l3 = AxiomResult::default();
    for gi in 0..k {
        for fi in 0..k {
            let cgf = &dc[gi * k + fi];
            for hi in 0..k {
                let cgh = &dc[gi * k + hi];
                let cfh = &dc[fi * k + hi];
                let ok = !(cgf > cgh) || cgh == cfh;
                l3.record(ok, || {
                    format!(
                        "g={}, f={}, h={}: c(g,f)={} c(g,h)={} c(f,h)={}",
                        fmt(&samples[triple_ids[gi]].word),
                        fmt(&samples[triple_ids[fi]].word),
                        fmt(&samples[triple_ids[hi]].word),
                        half_display(cgf),
                        half_display(cgh),
                        half_display(cfh)
                    )
                });
            }
        }
    }

    AxiomReport {
        radius,
        weights: weights.to_vec(),
        element_radius: radius,
        pair_radius,
        triple_radius,
        elements: ball.len(),
        pair_elements: pair_ids.len(),
        triple_elements: k,
        l1,
        l2,
        l3,
        l4,
        l5,
        l6,
    }
}

fn half_display(v: &LexVec) -> String {
    match v.halve() {
        Ok(h) => h.to_string(),
        Err(_) => format!("{v}/2"),
    }
}
