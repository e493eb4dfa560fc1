//! The `Z^n`-valued length: the minimum, over all words spelling an element,
//! of the sum of the letter lengths in the right-lexicographic order.
//!
//! Minimal words are Britton-reduced, and any two reduced spellings of an
//! element differ by sliding associated-subgroup elements across the stable
//! letters.  The engine therefore searches those slides exactly:
//!
//! 1. slides of stable-letter generators of an associated subgroup (for
//!    instance `t` across `s` in a tower where `s` centralizes `<xy, t>`)
//!    are enumerated level by level; they decide every coordinate above
//!    the first, and only the best configurations survive;
//! 2. slides of the base-word generator across every stable letter are
//!    optimized by a chain dynamic program over the surviving flat words.

use std::cell::RefCell;
use std::collections::HashMap;
use std::rc::Rc;

use thiserror::Error;

use crate::lexvec::{LexVec, LexVecError};
use crate::tower::{TowerError, TowerPresentation};
use crate::words::{inverse, power, push_reduced, Group, Letter, NormalForm, Word, WordError};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LengthError {
    #[error("HalfError: {0} is not divisible by two")]
    HalfError(LexVec),
    #[error("RegularityViolation: no common beginning certifies for the pair")]
    RegularityViolation,
    #[error("ReductionCapExceeded: more than {0} minimal configurations")]
    ReductionCapExceeded(usize),
    #[error("OracleBallExceeded: element outside the radius-{0} ball")]
    OracleBallExceeded(u64),
    #[error("OracleMismatch: engine {engine} vs oracle {oracle}")]
    OracleMismatch { engine: LexVec, oracle: LexVec },
    #[error(transparent)]
    Word(#[from] WordError),
}

impl From<LexVecError> for LengthError {
    fn from(e: LexVecError) -> Self {
        match e {
            LexVecError::HalfError(v) => LengthError::HalfError(v),
            LexVecError::RankMismatch { .. } => unreachable!("lengths share the tower rank"),
        }
    }
}

/// Upper bound on the number of minimal stable-letter configurations kept
/// for one element.
pub const CONFIG_CAP: usize = 100_000;

const CACHE_LIMIT: usize = 400_000;

/// A reduced spelling flattened to free pieces separated by stable letters.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
struct Config {
    pieces: Vec<Vec<Letter>>,
    stables: Vec<Letter>,
    /// Sum of the stable-letter lengths.
    stable_sum: LexVec,
}

impl Config {
    fn free(w: Vec<Letter>, n: usize) -> Config {
        Config { pieces: vec![w], stables: Vec::new(), stable_sum: LexVec::zero(n) }
    }

    fn append(&mut self, other: &Config) {
        let last = self.pieces.last_mut().unwrap();
        last.extend_from_slice(&other.pieces[0]);
        self.pieces.extend(other.pieces[1..].iter().cloned());
        self.stables.extend_from_slice(&other.stables);
        self.stable_sum.add_assign(&other.stable_sum);
    }

    fn push_stable(&mut self, s: Letter, len: &LexVec) {
        self.stables.push(s);
        self.pieces.push(Vec::new());
        self.stable_sum.add_assign(len);
    }
}

/// Coordinates above the first, compared right-lexicographically.
fn high_key(v: &LexVec) -> &[i64] {
    &v.coords()[1..]
}

fn high_cmp(a: &LexVec, b: &LexVec) -> std::cmp::Ordering {
    high_key(a).iter().rev().cmp(high_key(b).iter().rev())
}

/// Exact length computations over one tower.
pub struct LengthEngine {
    group: Group,
    n: usize,
    lengths: Vec<LexVec>,
    base_weight: Vec<i64>,
    cache: RefCell<HashMap<Vec<Letter>, Rc<Vec<Config>>>>,
}

impl LengthEngine {
    pub fn new(tower: &TowerPresentation) -> Result<LengthEngine, TowerError> {
        let group = Group::new(tower)?;
        Ok(Self::from_group(group))
    }

    pub fn from_group(group: Group) -> LengthEngine {
        let tower = group.tower();
        let n = tower.rank_n;
        let lengths = tower.lengths.clone();
        let base_weight = (0..tower.generator_count())
            .map(|g| if group.is_stable(g) { 0 } else { lengths[g].get(1) })
            .collect();
        LengthEngine { group, n, lengths, base_weight, cache: RefCell::new(HashMap::new()) }
    }

    pub fn group(&self) -> &Group {
        &self.group
    }

    pub fn tower(&self) -> &TowerPresentation {
        self.group.tower()
    }

    pub fn rank(&self) -> usize {
        self.n
    }

    /// Sum of letter lengths of a word.
    pub fn letter_sum(&self, w: &[Letter]) -> LexVec {
        let mut v = LexVec::zero(self.n);
        for l in w {
            v.add_assign(&self.lengths[l.gen()]);
        }
        v
    }

    pub fn length(&self, g: &[Letter]) -> LexVec {
        self.try_length(g).expect("configuration cap exceeded")
    }

    pub fn try_length(&self, g: &[Letter]) -> Result<LexVec, LengthError> {
        Ok(self.solve(g, false)?.0)
    }

    pub fn length_of(&self, g: &Word) -> LexVec {
        self.length(&g.0)
    }

    /// A minimal spelling of `g`.
    pub fn geodesic(&self, g: &[Letter]) -> Vec<Letter> {
        self.try_geodesic(g).expect("configuration cap exceeded")
    }

    pub fn try_geodesic(&self, g: &[Letter]) -> Result<Vec<Letter>, LengthError> {
        Ok(self.solve(g, true)?.1)
    }

    /// Rewrites a normal form into a minimal spelling of the same element;
    /// every adjacent pair of letters in the output is length-additive.
    pub fn length_reduce(&self, w: &NormalForm) -> Result<Word, LengthError> {
        Ok(Word(self.try_geodesic(&w.word.0)?))
    }

    fn solve(&self, g: &[Letter], want_word: bool) -> Result<(LexVec, Vec<Letter>), LengthError> {
        let r = self.group.reduce(g);
        let configs = self.configs(&r)?;
        let mut best: Option<(LexVec, usize, Vec<i64>)> = None;
        for (i, c) in configs.iter().enumerate() {
            let (cost, alphas) = self.flat_dp(c, want_word);
            let mut total = c.stable_sum.clone();
            total.add_assign(&LexVec::scaled_unit(self.n, 1, cost));
            if best.as_ref().map_or(true, |(b, _, _)| total < *b) {
                best = Some((total, i, alphas));
            }
        }
        let (total, i, alphas) = best.unwrap();
        let word = if want_word { self.flat_word(&configs[i], &alphas) } else { Vec::new() };
        Ok((total, word))
    }

    /// Minimal configurations of a reduced word (those minimizing the
    /// stable-letter sum above the first coordinate).
    fn configs(&self, w: &[Letter]) -> Result<Rc<Vec<Config>>, LengthError> {
        if let Some(c) = self.cache.borrow().get(w) {
            return Ok(c.clone());
        }
        let result = Rc::new(self.compute_configs(w)?);
        let mut cache = self.cache.borrow_mut();
        if cache.len() >= CACHE_LIMIT {
            cache.clear();
        }
        cache.insert(w.to_vec(), result.clone());
        Ok(result)
    }

    fn compute_configs(&self, w: &[Letter]) -> Result<Vec<Config>, LengthError> {
        let top = self.group.max_level(w);
        if top == 0 {
            return Ok(vec![Config::free(w.to_vec(), self.n)]);
        }
        let level = self.group.level(top);
        let s = level.stable;
        let mut pieces: Vec<&[Letter]> = Vec::new();
        let mut signs: Vec<Letter> = Vec::new();
        let mut start = 0;
        for (i, l) in w.iter().enumerate() {
            if l.gen() == s {
                pieces.push(&w[start..i]);
                signs.push(*l);
                start = i + 1;
            }
        }
        pieces.push(&w[start..]);
        let k = signs.len();
        let m = level.domain.rank();

        // Slide windows for the stable-letter generators of the subgroup.
        let windows: Vec<i64> = (1..m)
            .map(|c| {
                let a = level.domain.stables[c - 1];
                let b = level.image.stables[c - 1];
                w.iter().filter(|l| l.gen() == a || l.gen() == b).count() as i64
            })
            .collect();
        let states = box_states(&windows);
        let zero_state = states.iter().position(|v| v.iter().all(|&x| x == 0)).unwrap();

        // slide words: for a junction with sign e and state b, the piece on
        // the left gets `left_suffix`, the piece on the right `right_prefix`
        let slide = |e: Letter, b: &[i64], left: bool| -> Vec<Letter> {
            if b.iter().all(|&x| x == 0) {
                return Vec::new();
            }
            let mut exps = vec![0i64];
            let inv = (e.is_inverse() && left) || (!e.is_inverse() && !left);
            let neg = !left;
            exps.extend(b.iter().map(|&x| if neg { -x } else { x }));
            if inv {
                level.image.word(&exps)
            } else {
                level.domain.word(&exps)
            }
        };

        let nj = k;
        let ns = states.len();
        // piece configurations and their high cost for (left state, right state)
        type Cell = Option<Rc<Vec<Config>>>;
        let mut table: Vec<Vec<Vec<Cell>>> = Vec::with_capacity(k + 1);
        for (j, p) in pieces.iter().enumerate() {
            let lefts: Vec<usize> = if j == 0 { vec![zero_state] } else { (0..ns).collect() };
            let rights: Vec<usize> = if j == nj { vec![zero_state] } else { (0..ns).collect() };
            let mut rows = vec![vec![None; ns]; ns];
            for &a in &lefts {
                for &b in &rights {
                    let mut word = if j == 0 { Vec::new() } else { slide(signs[j - 1], &states[a], false) };
                    word.extend_from_slice(p);
                    if j < nj {
                        word.extend(slide(signs[j], &states[b], true));
                    }
                    let reduced = self.group.reduce_upto(&word, top - 1);
                    rows[a][b] = Some(self.configs(&reduced)?);
                }
            }
            table.push(rows);
        }
        let cost = |j: usize, a: usize, b: usize| -> LexVec {
            table[j][a][b].as_ref().unwrap()[0].stable_sum.clone()
        };

        // forward pass over junction states
        let mut fwd: Vec<Vec<Option<LexVec>>> = vec![vec![None; ns]; k + 1];
        fwd[0][zero_state] = Some(LexVec::zero(self.n));
        for j in 0..k {
            for a in 0..ns {
                let Some(base) = fwd[j][a].clone() else { continue };
                for b in 0..ns {
                    let mut v = base.clone();
                    v.add_assign(&cost(j, a, b));
                    let slot = &mut fwd[j + 1][b];
                    if slot.as_ref().map_or(true, |cur| high_cmp(&v, cur).is_lt()) {
                        *slot = Some(v);
                    }
                }
            }
        }
        let mut best: Option<LexVec> = None;
        for a in 0..ns {
            if let Some(v) = &fwd[k][a] {
                let mut v = v.clone();
                v.add_assign(&cost(k, a, zero_state));
                if best.as_ref().map_or(true, |b| high_cmp(&v, b).is_lt()) {
                    best = Some(v);
                }
            }
        }
        let best = best.unwrap();

        // backward pass, then enumerate every optimal path
        let mut bwd: Vec<Vec<Option<LexVec>>> = vec![vec![None; ns]; k + 1];
        for a in 0..ns {
            if fwd[k][a].is_some() {
                bwd[k][a] = Some(cost(k, a, zero_state));
            }
        }
        for j in (0..k).rev() {
            for a in 0..ns {
                if fwd[j][a].is_none() {
                    continue;
                }
                let mut acc: Option<LexVec> = None;
                for b in 0..ns {
                    if let Some(rest) = &bwd[j + 1][b] {
                        let mut v = cost(j, a, b);
                        v.add_assign(rest);
                        if acc.as_ref().map_or(true, |c| high_cmp(&v, c).is_lt()) {
                            acc = Some(v);
                        }
                    }
                }
                bwd[j][a] = acc;
            }
        }
        let tight = |j: usize, a: usize, b: usize| -> bool {
            match (&fwd[j][a], &bwd[j + 1][b]) {
                (Some(f), Some(r)) => {
                    let mut v = f.clone();
                    v.add_assign(&cost(j, a, b));
                    v.add_assign(r);
                    high_cmp(&v, &best).is_eq()
                }
                _ => false,
            }
        };

        let mut out: Vec<Config> = Vec::new();
        let mut path = vec![zero_state];
        let lens = &self.lengths;
        let emit = |path: &[usize], out: &mut Vec<Config>| -> Result<(), LengthError> {
            let mut partial: Vec<Config> = vec![Config::free(Vec::new(), self.n)];
            for j in 0..=k {
                let a = path[j];
                let b = if j == k { zero_state } else { path[j + 1] };
                let options = table[j][a][b].as_ref().unwrap();
                let mut next = Vec::with_capacity(partial.len() * options.len());
                for pre in &partial {
                    for opt in options.iter() {
                        let mut c = pre.clone();
                        c.append(opt);
                        if j < k {
                            c.push_stable(signs[j], &lens[s]);
                        }
                        next.push(c);
                    }
                }
                if next.len() > CONFIG_CAP {
                    return Err(LengthError::ReductionCapExceeded(CONFIG_CAP));
                }
                partial = next;
            }
            out.extend(partial);
            if out.len() > CONFIG_CAP {
                return Err(LengthError::ReductionCapExceeded(CONFIG_CAP));
            }
            Ok(())
        };
        fn walk(
            j: usize,
            k: usize,
            ns: usize,
            path: &mut Vec<usize>,
            tight: &dyn Fn(usize, usize, usize) -> bool,
            emit: &mut dyn FnMut(&[usize]) -> Result<(), LengthError>,
        ) -> Result<(), LengthError> {
            if j == k {
                return emit(path);
            }
            let a = path[j];
            for b in 0..ns {
                if tight(j, a, b) {
                    path.push(b);
                    walk(j + 1, k, ns, path, tight, emit)?;
                    path.pop();
                }
            }
            Ok(())
        }
        {
            let mut emit_out = |p: &[usize]| emit(p, &mut out);
            walk(0, k, ns, &mut path, &tight, &mut emit_out)?;
        }
        out.sort_by(|a, b| (&a.pieces, &a.stables).cmp(&(&b.pieces, &b.stables)));
        out.dedup();
        Ok(out)
    }

    /// Generator words slid across a stable letter: `(left, right)` with
    /// `left^a s = s right^a`.
    fn slide_words(&self, s: Letter) -> (&[Letter], &[Letter]) {
        let level = self.group.level(self.group.gen_level(s.gen()));
        if s.is_inverse() {
            (&level.image.base, &level.domain.base)
        } else {
            (&level.domain.base, &level.image.base)
        }
    }

    fn weight(&self, w: &[Letter]) -> i64 {
        w.iter().map(|l| self.base_weight[l.gen()]).sum()
    }

    /// Base-letter cost of the best base-generator slides for a flat word,
    /// with the chosen exponents when requested.
    fn flat_dp(&self, c: &Config, want: bool) -> (i64, Vec<i64>) {
        let k = c.stables.len();
        if k == 0 {
            return (self.weight(&c.pieces[0]), Vec::new());
        }
        let total: usize = c.pieces.iter().map(|p| p.len()).sum();
        let gens: Vec<(&[Letter], &[Letter])> = c.stables.iter().map(|&s| self.slide_words(s)).collect();
        let windows: Vec<i64> = gens
            .iter()
            .map(|(l, r)| (total / l.len().min(r.len()).max(1)) as i64 + 2)
            .collect();
        let pieces: Vec<PieceCost> = (0..=k)
            .map(|j| {
                let left = if j == 0 { None } else { Some(gens[j - 1].1) };
                let right = if j == k { None } else { Some(gens[j].0) };
                PieceCost::new(&c.pieces[j], left, right, &self.base_weight)
            })
            .collect();

        // dp[a] = best cost of pieces before junction j with alpha_j = a
        let mut dp: Vec<i64> = (-windows[0]..=windows[0]).map(|a| pieces[0].cost(0, a)).collect();
        let mut back: Vec<Vec<usize>> = Vec::new();
        for j in 1..k {
            let wa = windows[j - 1];
            let wb = windows[j];
            let mut next = vec![i64::MAX; (2 * wb + 1) as usize];
            let mut arg = vec![0usize; next.len()];
            for (bi, b) in (-wb..=wb).enumerate() {
                for (ai, a) in (-wa..=wa).enumerate() {
                    let v = dp[ai] + pieces[j].cost(a, b);
                    if v < next[bi] {
                        next[bi] = v;
                        arg[bi] = ai;
                    }
                }
            }
            if want {
                back.push(arg);
            }
            dp = next;
        }
        let wl = windows[k - 1];
        let mut best = i64::MAX;
        let mut best_a = 0usize;
        for (ai, a) in (-wl..=wl).enumerate() {
            let v = dp[ai] + pieces[k].cost(a, 0);
            if v < best {
                best = v;
                best_a = ai;
            }
        }
        if !want {
            return (best, Vec::new());
        }
        let mut idx = vec![0usize; k];
        idx[k - 1] = best_a;
        for j in (1..k).rev() {
            idx[j - 1] = back[j - 1][idx[j]];
        }
        let alphas = idx.iter().zip(&windows).map(|(&i, &w)| i as i64 - w).collect();
        (best, alphas)
    }

    fn flat_word(&self, c: &Config, alphas: &[i64]) -> Vec<Letter> {
        let k = c.stables.len();
        let mut out = Vec::new();
        for j in 0..=k {
            let mut piece = Vec::new();
            if j > 0 {
                let (_, r) = self.slide_words(c.stables[j - 1]);
                piece = power(r, -alphas[j - 1]);
            }
            push_reduced(&mut piece, &c.pieces[j]);
            if j < k {
                let (l, _) = self.slide_words(c.stables[j]);
                push_reduced(&mut piece, &power(l, alphas[j]));
            }
            out.extend(piece);
            if j < k {
                out.push(c.stables[j]);
            }
        }
        out
    }

    pub fn gromov_product(&self, g: &[Letter], f: &[Letter]) -> Result<LexVec, LengthError> {
        Ok(self.doubled_product(g, f).halve()?)
    }

    /// `l(g) + l(f) - l(g^-1 f)`.
    pub fn doubled_product(&self, g: &[Letter], f: &[Letter]) -> LexVec {
        let mut gf = inverse(g);
        gf.extend_from_slice(f);
        let mut v = self.length(g);
        v.add_assign(&self.length(f));
        &v - &self.length(&gf)
    }

    /// The common beginning of `g` and `f`: a prefix `u` of a minimal
    /// spelling with `l(u) = c(g, f)` splitting both elements additively.
    pub fn common_beginning(&self, g: &[Letter], f: &[Letter]) -> Result<Vec<Letter>, LengthError> {
        let c = self.gromov_product(g, f)?;
        let (lg, lf) = (self.length(g), self.length(f));
        let (wg, wf) = (self.geodesic(g), self.geodesic(f));
        self.certify_common_beginning((g, &lg, &wg), (f, &lf, &wf), &c)
            .ok_or(LengthError::RegularityViolation)
    }

    /// Scans prefixes of the minimal spelling of `g`, then of `f`, for one
    /// of length `c` that splits the other element additively.  Arguments
    /// are `(word, length, minimal spelling)`.
    pub fn certify_common_beginning(
        &self,
        g: (&[Letter], &LexVec, &[Letter]),
        f: (&[Letter], &LexVec, &[Letter]),
        c: &LexVec,
    ) -> Option<Vec<Letter>> {
        for (a, b) in [(g, f), (f, g)] {
            let Some(u) = self.prefix_with_length(a.2, c) else { continue };
            let mut rest = inverse(&u);
            rest.extend_from_slice(b.0);
            if &self.length(&rest) == &(b.1 - c) {
                return Some(u);
            }
        }
        None
    }

    fn prefix_with_length(&self, word: &[Letter], target: &LexVec) -> Option<Vec<Letter>> {
        let mut acc = LexVec::zero(self.n);
        if &acc == target {
            return Some(Vec::new());
        }
        for (i, l) in word.iter().enumerate() {
            acc.add_assign(&self.lengths[l.gen()]);
            if &acc == target {
                return Some(word[..=i].to_vec());
            }
            if &acc > target {
                return None;
            }
        }
        None
    }

    pub fn additive_junction(&self, f: &[Letter], g: &[Letter]) -> bool {
        let mut fg = f.to_vec();
        fg.extend_from_slice(g);
        self.length(&fg) == &self.length(f) + &self.length(g)
    }

    /// `l(g^2) = 2 l(g)`.
    pub fn is_cyclically_reduced(&self, g: &[Letter]) -> bool {
        let mut gg = g.to_vec();
        gg.extend_from_slice(g);
        self.length(&gg) == self.length(g).scale(2)
    }
}

/// Enumerates the integer box `[-w_1, w_1] x ... x [-w_r, w_r]`.
fn box_states(windows: &[i64]) -> Vec<Vec<i64>> {
    let mut states = vec![Vec::new()];
    for &w in windows {
        let mut next = Vec::new();
        for s in &states {
            for x in -w..=w {
                let mut v = s.clone();
                v.push(x);
                next.push(v);
            }
        }
        states = next;
    }
    states
}

/// Weighted length of `left^-a f right^b` for a freely reduced `f` and
/// cyclically reduced slide words, in constant time away from the
/// degenerate overlap case.
struct PieceCost<'a> {
    f: &'a [Letter],
    left: Option<&'a [Letter]>,
    right: Option<&'a [Letter]>,
    weights: &'a [i64],
    prefix_w: Vec<i64>,
    left_pos: usize,
    left_neg: usize,
    right_pos: usize,
    right_neg: usize,
    w_left: i64,
    w_right: i64,
    scratch: RefCell<Vec<Letter>>,
}

/// Appends `g^k` to a reduced buffer without materializing the power.
fn push_power(out: &mut Vec<Letter>, g: &[Letter], k: i64) {
    for _ in 0..k.unsigned_abs() {
        if k > 0 {
            push_reduced(out, g);
        } else {
            for l in g.iter().rev() {
                push_reduced(out, &[l.inverse()]);
            }
        }
    }
}

fn periodic_lcp(period: &[Letter], w: &[Letter]) -> usize {
    let n = period.len();
    w.iter().enumerate().take_while(|(i, l)| **l == period[i % n]).count()
}

impl<'a> PieceCost<'a> {
    fn new(f: &'a [Letter], left: Option<&'a [Letter]>, right: Option<&'a [Letter]>, weights: &'a [i64]) -> Self {
        let mut prefix_w = Vec::with_capacity(f.len() + 1);
        prefix_w.push(0);
        for l in f {
            prefix_w.push(prefix_w.last().unwrap() + weights[l.gen()]);
        }
        let finv = inverse(f);
        let w = |x: &[Letter]| x.iter().map(|l| weights[l.gen()]).sum::<i64>();
        let (mut left_pos, mut left_neg, mut w_left) = (0, 0, 0);
        if let Some(g) = left {
            left_pos = periodic_lcp(g, f);
            left_neg = periodic_lcp(&inverse(g), f);
            w_left = w(g);
        }
        let (mut right_pos, mut right_neg, mut w_right) = (0, 0, 0);
        if let Some(h) = right {
            right_pos = periodic_lcp(h, &finv);
            right_neg = periodic_lcp(&inverse(h), &finv);
            w_right = w(h);
        }
        PieceCost {
            f,
            left,
            right,
            weights,
            prefix_w,
            left_pos,
            left_neg,
            right_pos,
            right_neg,
            w_left,
            w_right,
            scratch: RefCell::new(Vec::new()),
        }
    }

    fn cost(&self, a: i64, b: i64) -> i64 {
        let n = self.f.len();
        let cl = match (self.left, a) {
            (_, 0) | (None, _) => 0,
            (Some(g), a) if a > 0 => (a as usize * g.len()).min(self.left_pos),
            (Some(g), a) => ((-a) as usize * g.len()).min(self.left_neg),
        };
        let cr = match (self.right, b) {
            (_, 0) | (None, _) => 0,
            (Some(h), b) if b > 0 => (b as usize * h.len()).min(self.right_pos),
            (Some(h), b) => ((-b) as usize * h.len()).min(self.right_neg),
        };
        if cl + cr < n || (cl + cr == n && (a == 0 || b == 0)) {
            let total = self.prefix_w[n];
            let kept = self.prefix_w[n - cr] - self.prefix_w[cl];
            return a.abs() * self.w_left + b.abs() * self.w_right + kept - (total - kept);
        }
        let mut w = self.scratch.borrow_mut();
        w.clear();
        if let Some(g) = self.left {
            push_power(&mut w, g, -a);
        }
        push_reduced(&mut w, self.f);
        if let Some(h) = self.right {
            push_power(&mut w, h, b);
        }
        w.iter().map(|l| self.weights[l.gen()]).sum()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;

    fn eng(t: &TowerPresentation) -> LengthEngine {
        LengthEngine::new(t).unwrap()
    }

    fn v(c: &[i64]) -> LexVec {
        LexVec::from_coords(c)
    }

    #[test]
    fn length_examples() {
        let f2 = fixtures::f2();
        let e = eng(&f2);
        assert_eq!(e.length(&[]), v(&[0, 0]));
        assert_eq!(e.length(&f2.parse_word("x x y").unwrap().0), v(&[3, 0]));
        let t1 = fixtures::t1();
        let e = eng(&t1);
        let w = |s: &str| t1.parse_word(s).unwrap().0;
        assert_eq!(e.length(&w("t^-1 x y t")), v(&[2, 0]));
        assert_eq!(e.length(&w("y^-1 x^-1 t x y")), v(&[0, 1]));
        assert_eq!(e.length(&w("t^-1 x t x^-1")), v(&[2, 2]));
        assert_eq!(e.length(&w("x y t")), v(&[2, 1]));
        assert_eq!(e.length(&w("x y t y^-1 x^-1 x")), v(&[1, 1]));
    }

    #[test]
    fn length_reduce_examples() {
        let t1 = fixtures::t1();
        let e = eng(&t1);
        let nf = e.group().britton_reduce(&t1.parse_word("y^-1 x^-1 t x y").unwrap());
        let r = e.length_reduce(&nf).unwrap();
        assert_eq!(t1.format_word(&r), "t");
        let nf = e.group().britton_reduce(&t1.parse_word("t^-1 x t x^-1").unwrap());
        assert_eq!(e.length_reduce(&nf).unwrap().len(), 4);
    }

    #[test]
    fn higher_slides() {
        let t3 = fixtures::t3();
        let e = eng(&t3);
        let w = |s: &str| t3.parse_word(s).unwrap().0;
        // t s t^-1 = s
        assert_eq!(e.length(&w("t s t^-1")), v(&[0, 0, 1]));
        assert_eq!(e.length(&w("x y t s t^-1 y^-1 x^-1")), v(&[0, 0, 1]));
        assert_eq!(e.length(&w("t x s x^-1 t^-1")), v(&[2, 2, 1]));
    }

    #[test]
    fn gromov_and_com() {
        let f2 = fixtures::f2();
        let e = eng(&f2);
        let w = |s: &str| f2.parse_word(s).unwrap().0;
        assert_eq!(e.gromov_product(&w("x y"), &w("x x")), Ok(v(&[1, 0])));
        assert_eq!(e.gromov_product(&w("x"), &w("y")), Ok(v(&[0, 0])));
        assert_eq!(f2.format_letters(&e.common_beginning(&w("x y"), &w("x x")).unwrap()), "x");
        assert!(e.common_beginning(&w("x"), &w("y")).unwrap().is_empty());
        let g = w("x y x^-1 y");
        assert_eq!(e.gromov_product(&g, &g), Ok(e.length(&g)));
        assert_eq!(e.common_beginning(&g, &g).unwrap(), g);
    }

    #[test]
    fn junctions() {
        let f2 = fixtures::f2();
        let e = eng(&f2);
        let w = |s: &str| f2.parse_word(s).unwrap().0;
        assert!(e.additive_junction(&w("x"), &w("y")));
        assert!(!e.additive_junction(&w("x"), &w("x^-1 y")));
        let t1 = fixtures::t1();
        let e = eng(&t1);
        assert!(e.additive_junction(&t1.parse_word("x y").unwrap().0, &t1.parse_word("t").unwrap().0));
    }
}
