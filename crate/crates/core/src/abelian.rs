//! Bases of abelian subgroups with strictly increasing heights.
//!
//! Commuting elements are conjugated to cyclically reduced ones, the
//! height-1 elements are collapsed onto one cyclic generator, and pairs of
//! equal height are merged by the gcd step until every height is occupied
//! at most once.  Each basis element carries its expression in the inputs,
//! and each input is recovered from the basis by peeling heights; both
//! directions are confirmed with the equality test.

use num_integer::Integer;
use thiserror::Error;

use crate::cyclic::cyclic_reduce;
use crate::length::LengthEngine;
use crate::lexvec::{LexVec, LexVecError};
use crate::words::{inverse, power, primitive_root, cyclic_exponent, Letter};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum AbelianError {
    #[error("HeightMismatch: heights {0} and {1}")]
    HeightMismatch(usize, usize),
    #[error("NonCommuting: the two elements do not commute")]
    NonCommuting,
    #[error("NonCommutingInput: inputs {0} and {1} do not commute")]
    NonCommutingInput(usize, usize),
    #[error("ConjugatorMismatch: no common conjugator makes every input cyclically reduced")]
    ConjugatorMismatch,
    #[error("CertificateFailed: {0}")]
    CertificateFailed(String),
    #[error(transparent)]
    Rank(#[from] LexVecError),
}

/// Greatest top components per height, `0` for unoccupied heights.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HeightProfile {
    pub lengths: Vec<LexVec>,
    pub bounds: Vec<i64>,
}

impl HeightProfile {
    pub fn from_lengths(rank: usize, lengths: &[LexVec]) -> Result<HeightProfile, LexVecError> {
        let mut bounds = vec![0i64; rank];
        for l in lengths {
            if l.rank() != rank {
                return Err(LexVecError::RankMismatch { left: rank, right: l.rank() });
            }
            let h = l.height();
            if h > 0 {
                bounds[h - 1] = bounds[h - 1].max(l.top_component());
            }
        }
        Ok(HeightProfile { lengths: lengths.to_vec(), bounds })
    }

    pub fn rank(&self) -> usize {
        self.bounds.len()
    }
}

pub fn is_r_bounded(p: &[LexVec], profile: &HeightProfile) -> Result<bool, LexVecError> {
    let n = profile.rank();
    for v in p {
        if v.rank() != n {
            return Err(LexVecError::RankMismatch { left: n, right: v.rank() });
        }
    }
    Ok(p.iter().all(|v| v.coords().iter().zip(&profile.bounds).all(|(a, l)| a <= l)))
}

/// Nonnegative vectors in the box `[0, L_1] x ... x [0, L_n]`, which is
/// the largest R-bounded set of nonnegative length vectors.
pub fn maximal_r_bounded(profile: &HeightProfile) -> Vec<LexVec> {
    let mut out = vec![Vec::new()];
    for &l in &profile.bounds {
        out = out
            .into_iter()
            .flat_map(|v: Vec<i64>| {
                (0..=l.max(0)).map(move |x| {
                    let mut v = v.clone();
                    v.push(x);
                    v
                })
            })
            .collect();
    }
    let mut vs: Vec<LexVec> = out.iter().map(|c| LexVec::from_coords(c)).collect();
    vs.sort();
    vs
}

/// Whether `p` is R-bounded and no nonnegative vector of the box enlarged
/// by one in every direction can be added while staying R-bounded.
pub fn is_maximal_r_bounded(p: &[LexVec], profile: &HeightProfile) -> Result<bool, LexVecError> {
    if !is_r_bounded(p, profile)? {
        return Ok(false);
    }
    let wider = HeightProfile { lengths: Vec::new(), bounds: profile.bounds.iter().map(|l| l + 1).collect() };
    for v in maximal_r_bounded(&wider) {
        if !p.contains(&v) && is_r_bounded(std::slice::from_ref(&v), profile)? {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Result of merging two commuting elements of equal height: `<s, t> =
/// <p, s_rem, t_rem>` with the remainders of lower height.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Combined {
    pub p: Vec<Letter>,
    pub s_rem: Vec<Letter>,
    pub t_rem: Vec<Letter>,
    pub sigma: i64,
    pub tau: i64,
    /// Whether `t` was replaced by `t^-1` to align its direction with `s`.
    pub flipped: bool,
    /// `m_s / m` and `m_t / m`.
    pub quotients: (i64, i64),
}

/// `(g, sigma, tau)` with `sigma a + tau b = g = gcd(a, b)` and `|sigma|`
/// minimal, positive on ties.
pub fn ext_gcd_min(a: i64, b: i64) -> (i64, i64, i64) {
    let e = a.extended_gcd(&b);
    let (g, x0) = (e.gcd, e.x);
    let step = b / g;
    let mut best = x0;
    let r = x0.rem_euclid(step);
    for cand in [r, r - step] {
        if cand.abs() < best.abs() || (cand.abs() == best.abs() && cand > best) {
            best = cand;
        }
    }
    (g, best, (g - best * a) / b)
}

fn cat(parts: &[&[Letter]]) -> Vec<Letter> {
    parts.iter().flat_map(|p| p.iter().copied()).collect()
}

pub fn combine_equal_height(engine: &LengthEngine, s: &[Letter], t: &[Letter]) -> Result<Combined, AbelianError> {
    let (ls, lt) = (engine.length(s), engine.length(t));
    let (h, ht) = (ls.height(), lt.height());
    if h != ht || h == 0 {
        return Err(AbelianError::HeightMismatch(h, ht));
    }
    if !engine.group().commute(s, t) {
        return Err(AbelianError::NonCommuting);
    }
    let (ms, mt) = (ls.top_component(), lt.top_component());
    let st = engine.length(&cat(&[s, t]));
    let flipped = st.height() != h || st.top_component() != ms + mt;
    let t: Vec<Letter> = if flipped { inverse(t) } else { t.to_vec() };
    let (m, sigma, tau) = ext_gcd_min(ms, mt);
    let group = engine.group();
    let (p, sigma, tau) = if m == ms { (s.to_vec(), 1, 0) } else { (cat(&[&power(s, sigma), &power(&t, tau)]), sigma, tau) };
    let p = engine.geodesic(&group.reduce(&p));
    let (qs, qt) = (ms / m, mt / m);
    let s_rem = engine.geodesic(&cat(&[s, &power(&p, -qs)]));
    let t_rem = engine.geodesic(&cat(&[&t, &power(&p, -qt)]));
    for r in [&s_rem, &t_rem] {
        if engine.length(r).height() >= h {
            return Err(AbelianError::CertificateFailed(format!(
                "remainder {} does not drop below height {h}",
                engine.tower().format_letters(r)
            )));
        }
    }
    Ok(Combined { p, s_rem, t_rem, sigma, tau, flipped, quotients: (qs, qt) })
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AbelianBasis {
    pub gens: Vec<Vec<Letter>>,
    pub heights: Vec<usize>,
    /// The basis generates `x^-1 A x` for this conjugator `x`.
    pub conjugator: Vec<Letter>,
    /// Row `j`: exponents of the conjugated inputs giving basis element `j`.
    pub from_inputs: Vec<Vec<i64>>,
    /// Row `i`: exponents of the basis giving conjugated input `i`.
    pub to_inputs: Vec<Vec<i64>>,
    pub radius: u64,
}

#[derive(Clone)]
struct Elem {
    word: Vec<Letter>,
    len: LexVec,
    coeffs: Vec<i64>,
}

fn add_scaled(a: &mut [i64], b: &[i64], k: i64) {
    for (x, y) in a.iter_mut().zip(b) {
        *x += k * y;
    }
}

/// Product of powers `prod words[j]^exps[j]`.
fn product(words: &[Vec<Letter>], exps: &[i64]) -> Vec<Letter> {
    let mut out = Vec::new();
    for (w, &e) in words.iter().zip(exps) {
        out.extend(power(w, e));
    }
    out
}

pub fn reduce_basis(
    engine: &LengthEngine,
    inputs: &[Vec<Letter>],
    radius: Option<u64>,
) -> Result<AbelianBasis, AbelianError> {
    let group = engine.group();
    let radius = radius.unwrap_or_else(|| 2 * inputs.iter().map(|w| w.len() as u64).max().unwrap_or(0));
    for i in 0..inputs.len() {
        for j in i + 1..inputs.len() {
            if !group.commute(&inputs[i], &inputs[j]) {
                return Err(AbelianError::NonCommutingInput(i, j));
            }
        }
    }

    // a common conjugator making every nontrivial input cyclically reduced
    let nontrivial: Vec<usize> = (0..inputs.len()).filter(|&i| !group.is_identity(&inputs[i])).collect();
    let conj_of = |x: &[Letter], w: &[Letter]| cat(&[&inverse(x), w, x]);
    let mut candidates: Vec<Vec<Letter>> = vec![Vec::new()];
    for &i in &nontrivial {
        let r = cyclic_reduce(engine, &inputs[i]).expect("nontrivial input");
        candidates.push(r.conjugator);
    }
    let conjugator = candidates
        .into_iter()
        .find(|x| nontrivial.iter().all(|&i| engine.is_cyclically_reduced(&conj_of(x, &inputs[i]))))
        .ok_or(AbelianError::ConjugatorMismatch)?;
    let conjugated: Vec<Vec<Letter>> = inputs.iter().map(|w| engine.geodesic(&conj_of(&conjugator, w))).collect();

    let k = inputs.len();
    let mut cur: Vec<Elem> = nontrivial
        .iter()
        .map(|&i| {
            let mut coeffs = vec![0i64; k];
            coeffs[i] = 1;
            Elem { word: conjugated[i].clone(), len: engine.length(&conjugated[i]), coeffs }
        })
        .collect();

    collapse_height_one(engine, &mut cur);

    let measure = |cur: &[Elem]| -> Vec<i64> {
        let n = engine.rank();
        let mut m = Vec::new();
        for h in (1..=n).rev() {
            let at: Vec<&Elem> = cur.iter().filter(|e| e.len.height() == h).collect();
            m.push(at.len() as i64);
            m.push(at.iter().map(|e| e.len.top_component()).max().unwrap_or(0));
        }
        m
    };
    let mut last = measure(&cur);
    loop {
        cur.retain(|e| !e.len.is_zero());
        let top = (1..=engine.rank()).rev().find(|&h| cur.iter().filter(|e| e.len.height() == h).count() >= 2);
        let Some(h) = top else { break };
        let idx: Vec<usize> = (0..cur.len()).filter(|&i| cur[i].len.height() == h).take(2).collect();
        let (a, b) = (cur[idx[0]].clone(), cur[idx[1]].clone());
        let c = combine_equal_height(engine, &a.word, &b.word)?;
        let bs = if c.flipped { b.coeffs.iter().map(|x| -x).collect() } else { b.coeffs.clone() };
        let mut pc = vec![0i64; k];
        add_scaled(&mut pc, &a.coeffs, c.sigma);
        add_scaled(&mut pc, &bs, c.tau);
        let mut sc = a.coeffs.clone();
        add_scaled(&mut sc, &pc, -c.quotients.0);
        let mut tc = bs;
        add_scaled(&mut tc, &pc, -c.quotients.1);
        cur.remove(idx[1]);
        cur.remove(idx[0]);
        for (w, co) in [(c.p, pc), (c.s_rem, sc), (c.t_rem, tc)] {
            let len = engine.length(&w);
            cur.push(Elem { word: w, len, coeffs: co });
        }
        collapse_height_one(engine, &mut cur);
        cur.retain(|e| !e.len.is_zero());
        let now = measure(&cur);
        assert!(now < last, "height profile must decrease");
        last = now;
    }
    cur.sort_by_key(|e| e.len.height());
    size_reduce(engine, &mut cur);

    let gens: Vec<Vec<Letter>> = cur.iter().map(|e| e.word.clone()).collect();
    let heights: Vec<usize> = cur.iter().map(|e| e.len.height()).collect();
    let from_inputs: Vec<Vec<i64>> = cur.iter().map(|e| e.coeffs.clone()).collect();
    let fmt = |w: &[Letter]| engine.tower().format_letters(w);

    for (j, row) in from_inputs.iter().enumerate() {
        if !group.equal(&product(&conjugated, row), &gens[j]) {
            return Err(AbelianError::CertificateFailed(format!("basis element {} from inputs", fmt(&gens[j]))));
        }
    }
    let mut to_inputs = Vec::with_capacity(k);
    for w in &conjugated {
        let exps = peel(engine, &gens, w, radius)
            .ok_or_else(|| AbelianError::CertificateFailed(format!("input {} from the basis", fmt(w))))?;
        to_inputs.push(exps);
    }
    Ok(AbelianBasis { gens, heights, conjugator, from_inputs, to_inputs, radius })
}

/// Shortens each basis element by single powers of the lower ones while
/// that lowers its length; the generated subgroup is unchanged.
fn size_reduce(engine: &LengthEngine, cur: &mut [Elem]) {
    for j in 1..cur.len() {
        for i in (0..j).rev() {
            loop {
                let mut moved = false;
                for e in [1i64, -1] {
                    let w = engine.geodesic(&cat(&[&cur[j].word, &power(&cur[i].word, -e)]));
                    let len = engine.length(&w);
                    if len < cur[j].len {
                        let lower = cur[i].coeffs.clone();
                        add_scaled(&mut cur[j].coeffs, &lower, -e);
                        cur[j].word = w;
                        cur[j].len = len;
                        moved = true;
                        break;
                    }
                }
                if !moved {
                    break;
                }
            }
        }
    }
}

/// Collapses all height-1 elements onto a single generator.  Base words
/// use root extraction; anything else goes through the gcd step.
fn collapse_height_one(engine: &LengthEngine, cur: &mut Vec<Elem>) {
    let group = engine.group();
    let ones: Vec<usize> = (0..cur.len()).filter(|&i| cur[i].len.height() == 1).collect();
    if ones.len() < 2 || ones.iter().any(|&i| group.max_level(&cur[i].word) > 0) {
        return;
    }
    let (root, _) = primitive_root(&cur[ones[0]].word);
    let mut exps = Vec::new();
    for &i in &ones {
        match cyclic_exponent(&cur[i].word, &root) {
            Some(e) => exps.push(e),
            None => return,
        }
    }
    // r^g as a product of the elements, by iterated extended gcd
    let k = cur[0].coeffs.len();
    let (mut g, mut co) = (exps[0], cur[ones[0]].coeffs.clone());
    for (pos, &i) in ones.iter().enumerate().skip(1) {
        let e = g.extended_gcd(&exps[pos]);
        let mut next = vec![0i64; k];
        add_scaled(&mut next, &co, e.x);
        add_scaled(&mut next, &cur[i].coeffs, e.y);
        g = e.gcd;
        co = next;
    }
    if g < 0 {
        g = -g;
        co.iter_mut().for_each(|x| *x = -*x);
    }
    let word = power(&root, g);
    let len = engine.length(&word);
    let mut keep: Vec<Elem> = cur.iter().enumerate().filter(|(i, _)| !ones.contains(i)).map(|(_, e)| e.clone()).collect();
    keep.push(Elem { word, len, coeffs: co });
    *cur = keep;
}

/// Exponents of `g` over a basis of strictly increasing heights, reading
/// off the top height first; `None` if `g` is not in the span or an
/// exponent would exceed `bound`.
fn peel(engine: &LengthEngine, basis: &[Vec<Letter>], g: &[Letter], bound: u64) -> Option<Vec<i64>> {
    let group = engine.group();
    let mut exps = vec![0i64; basis.len()];
    let mut rest = g.to_vec();
    for j in (0..basis.len()).rev() {
        let lr = engine.length(&rest);
        if lr.is_zero() {
            break;
        }
        let lb = engine.length(&basis[j]);
        if lr.height() > lb.height() {
            return None;
        }
        if lr.height() < lb.height() {
            continue;
        }
        let (mr, mb) = (lr.top_component(), lb.top_component());
        if mr % mb != 0 {
            return None;
        }
        let q = mr / mb;
        if q.unsigned_abs() > bound.max(1) {
            return None;
        }
        // same direction as the basis element iff the top components add
        let lrb = engine.length(&cat(&[&rest, &basis[j]]));
        let e = if lrb.height() == lb.height() && lrb.top_component() == mr + mb { q } else { -q };
        let cand = engine.geodesic(&cat(&[&rest, &power(&basis[j], -e)]));
        if engine.length(&cand).height() >= lb.height() {
            return None;
        }
        exps[j] = e;
        rest = cand;
    }
    if !group.is_identity(&rest) {
        return None;
    }
    group.equal(&product(basis, &exps), g).then_some(exps)
}
