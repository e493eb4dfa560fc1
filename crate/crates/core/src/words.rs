//! Words over a tower: free reduction, Britton reduction, membership in the
//! associated abelian subgroups, canonical normal forms and equality.

use std::fmt;

use thiserror::Error;

use crate::tower::{TowerError, TowerPresentation};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum WordError {
    #[error("LevelOutOfRange: level {level} (tower has {levels} levels)")]
    LevelOutOfRange { level: usize, levels: usize },
    #[error("IdentityInput: operation needs a nontrivial element")]
    IdentityInput,
}

/// A signed generator: index `g` is stored as `g + 1`, inverses negated.
#[derive(Copy, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Letter(i32);

impl Letter {
    pub fn new(gen: usize, inverse: bool) -> Letter {
        let v = gen as i32 + 1;
        Letter(if inverse { -v } else { v })
    }

    pub fn gen(self) -> usize {
        (self.0.unsigned_abs() - 1) as usize
    }

    pub fn is_inverse(self) -> bool {
        self.0 < 0
    }

    pub fn sign(self) -> i64 {
        if self.0 < 0 {
            -1
        } else {
            1
        }
    }

    pub fn inverse(self) -> Letter {
        Letter(-self.0)
    }

    /// `letter^exp` for exp = ±1.
    pub fn pow_sign(self, exp: i64) -> Letter {
        if exp < 0 {
            self.inverse()
        } else {
            self
        }
    }
}

impl fmt::Debug for Letter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_inverse() {
            write!(f, "g{}^-1", self.gen())
        } else {
            write!(f, "g{}", self.gen())
        }
    }
}

#[derive(Clone, PartialEq, Eq, Hash, Default, PartialOrd, Ord, Debug)]
pub struct Word(pub Vec<Letter>);

impl Word {
    pub fn empty() -> Word {
        Word(Vec::new())
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn letters(&self) -> &[Letter] {
        &self.0
    }

    pub fn inverse(&self) -> Word {
        Word(inverse(&self.0))
    }

    pub fn concat(&self, other: &Word) -> Word {
        let mut v = self.0.clone();
        v.extend_from_slice(&other.0);
        Word(v)
    }

    pub fn pow(&self, k: i64) -> Word {
        Word(power(&self.0, k))
    }
}

impl From<Vec<Letter>> for Word {
    fn from(v: Vec<Letter>) -> Word {
        Word(v)
    }
}

pub fn inverse(w: &[Letter]) -> Vec<Letter> {
    w.iter().rev().map(|l| l.inverse()).collect()
}

pub fn power(w: &[Letter], k: i64) -> Vec<Letter> {
    let base = if k < 0 { inverse(w) } else { w.to_vec() };
    let mut out = Vec::with_capacity(base.len() * k.unsigned_abs() as usize);
    for _ in 0..k.unsigned_abs() {
        out.extend_from_slice(&base);
    }
    out
}

/// Append letters to an already reduced buffer, cancelling as we go.
pub fn push_reduced(out: &mut Vec<Letter>, letters: &[Letter]) {
    for &l in letters {
        if out.last() == Some(&l.inverse()) {
            out.pop();
        } else {
            out.push(l);
        }
    }
}

pub fn free_reduce_letters(w: &[Letter]) -> Vec<Letter> {
    let mut out = Vec::with_capacity(w.len());
    push_reduced(&mut out, w);
    out
}

pub fn free_reduce(w: &Word) -> Word {
    Word(free_reduce_letters(&w.0))
}

/// Free cyclic reduction: returns (core, conjugator) with `w = conj core conj^-1`.
pub fn free_cyclic_reduce(w: &[Letter]) -> (Vec<Letter>, Vec<Letter>) {
    let r = free_reduce_letters(w);
    let mut i = 0;
    let mut j = r.len();
    while j > i + 1 && r[i] == r[j - 1].inverse() {
        i += 1;
        j -= 1;
    }
    (r[i..j].to_vec(), r[..i].to_vec())
}

/// Shortest word `r` with `w = r^k` for some `k >= 1`.
pub fn primitive_root(w: &[Letter]) -> (Vec<Letter>, i64) {
    let n = w.len();
    for d in 1..=n {
        if n % d == 0 && (d..n).all(|i| w[i] == w[i - d]) {
            return (w[..d].to_vec(), (n / d) as i64);
        }
    }
    (Vec::new(), 0)
}

/// Which of the two associated subgroups of a level.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Side {
    Domain,
    Image,
}

/// Basis of an associated subgroup: a cyclically reduced base word
/// followed by stable letters of earlier centralizer extensions, each
/// centralizing the subgroup generated by everything before it.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Flag {
    pub base: Vec<Letter>,
    pub stables: Vec<usize>,
}

impl Flag {
    pub fn rank(&self) -> usize {
        1 + self.stables.len()
    }

    pub fn prefix(&self, m: usize) -> Flag {
        Flag { base: self.base.clone(), stables: self.stables[..m - 1].to_vec() }
    }

    /// Word of generator `k` (0-based).
    pub fn generator(&self, k: usize) -> Vec<Letter> {
        if k == 0 {
            self.base.clone()
        } else {
            vec![Letter::new(self.stables[k - 1], false)]
        }
    }

    /// `c_1^{e_1} c_2^{e_2} ...`.
    pub fn word(&self, exps: &[i64]) -> Vec<Letter> {
        let mut out = power(&self.base, exps[0]);
        for (k, &e) in exps.iter().enumerate().skip(1) {
            out.extend(power(&[Letter::new(self.stables[k - 1], false)], e));
        }
        out
    }
}

#[derive(Debug, Clone)]
pub struct LevelData {
    pub stable: usize,
    pub domain: Flag,
    pub image: Flag,
    pub centralizer: bool,
}

impl LevelData {
    pub fn flag(&self, side: Side) -> &Flag {
        match side {
            Side::Domain => &self.domain,
            Side::Image => &self.image,
        }
    }
}

/// Result of Britton reduction with canonical coset representatives.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct NormalForm {
    pub word: Word,
    /// Highest level whose stable letter occurs (0 for free words).
    pub tower_level: usize,
}

/// A tower prepared for word computations.
#[derive(Debug, Clone)]
pub struct Group {
    tower: TowerPresentation,
    gen_level: Vec<usize>,
    levels: Vec<LevelData>,
}

impl Group {
    pub fn new(tower: &TowerPresentation) -> Result<Group, TowerError> {
        let gen_level: Vec<usize> = (0..tower.generator_count()).map(|g| tower.generator_level(g)).collect();
        let mut levels: Vec<LevelData> = Vec::new();
        for (i, level) in tower.levels.iter().enumerate() {
            let level_no = i + 1;
            let mut flags = Vec::new();
            for side in [Side::Domain, Side::Image] {
                let mut flag = Flag { base: Vec::new(), stables: Vec::new() };
                for (k, pair) in level.assoc.iter().enumerate() {
                    let w = match side {
                        Side::Domain => &pair.gen_word.0,
                        Side::Image => &pair.image_word.0,
                    };
                    let shape = |message: String| TowerError::AssocShapeViolation {
                        level: level_no,
                        pair: k + 1,
                        message,
                    };
                    if k == 0 {
                        if w.iter().any(|l| gen_level[l.gen()] != 0) {
                            return Err(shape("first assoc generator must be a base word".into()));
                        }
                        let (core, conj) = free_cyclic_reduce(w);
                        if core.len() != w.len() || !conj.is_empty() {
                            return Err(shape("first assoc generator must be cyclically reduced".into()));
                        }
                        flag.base = w.clone();
                        continue;
                    }
                    if w.len() != 1 || w[0].is_inverse() || gen_level[w[0].gen()] == 0 {
                        return Err(shape("assoc generators after the first must be single stable letters".into()));
                    }
                    let j = gen_level[w[0].gen()];
                    let earlier = &levels[j - 1];
                    if !earlier.centralizer || earlier.domain != flag {
                        return Err(shape(format!(
                            "`{}` must centralize exactly the subgroup generated by the preceding assoc generators",
                            tower.name(w[0].gen())
                        )));
                    }
                    flag.stables.push(w[0].gen());
                }
                flags.push(flag);
            }
            let image = flags.pop().unwrap();
            let domain = flags.pop().unwrap();
            levels.push(LevelData {
                stable: level.stable,
                domain,
                image,
                centralizer: level.is_centralizer_extension,
            });
        }
        Ok(Group { tower: tower.clone(), gen_level, levels })
    }

    pub fn tower(&self) -> &TowerPresentation {
        &self.tower
    }

    pub fn level_count(&self) -> usize {
        self.levels.len()
    }

    pub fn level(&self, i: usize) -> &LevelData {
        &self.levels[i - 1]
    }

    pub fn gen_level(&self, gen: usize) -> usize {
        self.gen_level[gen]
    }

    pub fn is_stable(&self, gen: usize) -> bool {
        self.gen_level[gen] > 0
    }

    pub fn max_level(&self, w: &[Letter]) -> usize {
        w.iter().map(|l| self.gen_level[l.gen()]).max().unwrap_or(0)
    }

    /// All letters `g` and `g^-1` in generator order.
    pub fn alphabet(&self) -> Vec<Letter> {
        (0..self.gen_level.len()).flat_map(|g| [Letter::new(g, false), Letter::new(g, true)]).collect()
    }

    /// Britton reduction (pinch removal at every level plus free reduction).
    pub fn reduce(&self, w: &[Letter]) -> Vec<Letter> {
        self.reduce_upto(w, self.max_level(w))
    }

    /// Britton reduction of a word whose letters have level at most `k`.
    pub fn reduce_upto(&self, w: &[Letter], k: usize) -> Vec<Letter> {
        if k == 0 {
            return free_reduce_letters(w);
        }
        let level = &self.levels[k - 1];
        let s = level.stable;
        if !w.iter().any(|l| l.gen() == s) {
            return self.reduce_upto(w, k - 1);
        }
        let mut pieces: Vec<Vec<Letter>> = Vec::new();
        let mut signs: Vec<Letter> = Vec::new();
        let mut start = 0;
        let mut first = true;
        let mut pending: Option<Letter> = None;
        for idx in 0..=w.len() {
            let at_stable = idx < w.len() && w[idx].gen() == s;
            if !(at_stable || idx == w.len()) {
                continue;
            }
            let segment = &w[start..idx];
            if first {
                pieces.push(self.reduce_upto(segment, k - 1));
                first = false;
            } else {
                let e = pending.take().unwrap();
                self.push_piece(&mut pieces, &mut signs, e, segment, k);
            }
            if at_stable {
                pending = Some(w[idx]);
            }
            start = idx + 1;
        }
        let mut out = Vec::with_capacity(w.len());
        for (i, p) in pieces.iter().enumerate() {
            out.extend_from_slice(p);
            if i < signs.len() {
                out.push(signs[i]);
            }
        }
        out
    }

    fn push_piece(&self, pieces: &mut Vec<Vec<Letter>>, signs: &mut Vec<Letter>, e: Letter, q: &[Letter], k: usize) {
        let level = &self.levels[k - 1];
        if let Some(&prev) = signs.last() {
            if prev == e.inverse() {
                // s^-1 p s with p in C, or s p s^-1 with p in φ(C)
                let (from, to) = if prev.is_inverse() {
                    (&level.domain, &level.image)
                } else {
                    (&level.image, &level.domain)
                };
                let mid = pieces.last().unwrap();
                if let Some(exps) = self.member(mid, from) {
                    pieces.pop();
                    signs.pop();
                    let mut merged = pieces.pop().unwrap();
                    merged.extend(to.word(&exps));
                    merged.extend_from_slice(q);
                    pieces.push(self.reduce_upto(&merged, k - 1));
                    return;
                }
            }
        }
        signs.push(e);
        pieces.push(self.reduce_upto(q, k - 1));
    }

    /// Exponents of a reduced word in the subgroup spanned by `flag`.
    pub fn member(&self, p: &[Letter], flag: &Flag) -> Option<Vec<i64>> {
        let m = flag.rank();
        let mut exps = vec![0i64; m];
        let mut cur: Vec<Letter> = p.to_vec();
        for k in (1..m).rev() {
            let sg = flag.stables[k - 1];
            let lvl = self.gen_level[sg];
            if self.max_level(&cur) > lvl {
                return None;
            }
            let (mut pos, mut neg) = (0i64, 0i64);
            for l in &cur {
                if l.gen() == sg {
                    if l.is_inverse() {
                        neg += 1;
                    } else {
                        pos += 1;
                    }
                }
            }
            if pos > 0 && neg > 0 {
                return None;
            }
            let a = pos - neg;
            exps[k] = a;
            if a != 0 {
                cur.extend(power(&[Letter::new(sg, false)], -a));
                cur = self.reduce_upto(&cur, lvl);
                if cur.iter().any(|l| l.gen() == sg) {
                    return None;
                }
            }
        }
        if self.max_level(&cur) > 0 {
            return None;
        }
        exps[0] = cyclic_exponent(&cur, &flag.base)?;
        Some(exps)
    }

    /// Membership of an arbitrary word in `C_i` (Domain) or `φ_i(C_i)` (Image).
    pub fn abelian_membership(&self, g: &[Letter], level: usize, side: Side) -> Result<Option<Vec<i64>>, WordError> {
        if level == 0 || level > self.levels.len() {
            return Err(WordError::LevelOutOfRange { level, levels: self.levels.len() });
        }
        let r = self.reduce(g);
        if self.max_level(&r) >= level {
            return Ok(None);
        }
        Ok(self.member(&r, self.levels[level - 1].flag(side)))
    }

    /// Britton reduction followed by canonical coset representatives.
    ///
    /// Reading left to right, the piece in front of each top-level stable
    /// letter is replaced by its representative modulo the associated
    /// subgroup the letter can absorb; the discarded subgroup element is
    /// pushed through the letter into the next piece.
    pub fn canonical(&self, w: &[Letter]) -> Vec<Letter> {
        let r = self.reduce(w);
        self.canon_reduced(&r)
    }

    fn canon_reduced(&self, r: &[Letter]) -> Vec<Letter> {
        let top = self.max_level(r);
        if top == 0 {
            return r.to_vec();
        }
        let level = &self.levels[top - 1];
        let s = level.stable;
        let mut out = Vec::with_capacity(r.len());
        let mut carry: Vec<Letter> = Vec::new();
        let mut started = false;
        let mut i = 0;
        loop {
            let j = r[i..].iter().position(|l| l.gen() == s).map(|p| p + i);
            let segment = &r[i..j.unwrap_or(r.len())];
            if !started {
                carry = segment.to_vec();
                started = true;
            } else {
                carry.extend_from_slice(segment);
                carry = self.reduce_upto(&carry, top - 1);
            }
            let Some(j) = j else { break };
            let e = r[j];
            let (from, to) = if e.is_inverse() {
                (&level.image, &level.domain)
            } else {
                (&level.domain, &level.image)
            };
            let (rep, z) = self.coset_rep(&carry, from);
            out.extend(rep);
            out.push(e);
            carry = to.word(&z);
            i = j + 1;
        }
        let last = self.canon_reduced(&carry);
        out.extend(last);
        out
    }

    /// `(rep, z)` with `p = rep * flag.word(z)` and `rep` depending only on
    /// the coset `p <flag>`.
    pub fn coset_rep(&self, p: &[Letter], flag: &Flag) -> (Vec<Letter>, Vec<i64>) {
        let cp = self.canonical(p);
        self.rep_rec(&cp, flag, flag.rank())
    }

    fn rep_rec(&self, cp: &[Letter], flag: &Flag, m: usize) -> (Vec<Letter>, Vec<i64>) {
        if m == 1 {
            let cut = cp.iter().rposition(|l| self.is_stable(l.gen())).map_or(0, |p| p + 1);
            let (b, tail) = best_cyclic_shift(&cp[cut..], &flag.base);
            let mut rep = cp[..cut].to_vec();
            rep.extend(tail);
            return (rep, vec![-b]);
        }
        let sg = flag.stables[m - 2];
        let j = self.gen_level[sg];
        let top = self.max_level(cp);
        if top < j {
            let (rep, mut z) = self.rep_rec(cp, flag, m - 1);
            z.push(0);
            return (rep, z);
        }
        let ts = self.levels[top - 1].stable;
        let i = cp.iter().rposition(|l| l.gen() == ts).unwrap();
        let (q, e, h) = (&cp[..i], cp[i], &cp[i + 1..]);
        if top > j {
            let (rep_h, z) = self.rep_rec(h, flag, m);
            let mut rep = cp[..=i].to_vec();
            rep.extend(rep_h);
            return (rep, z);
        }
        let lower = flag.prefix(m - 1);
        if let Some(zh) = self.member(h, &lower) {
            let (rep, mut z) = self.rep_rec(q, flag, m);
            for (a, b) in z.iter_mut().zip(zh.iter()) {
                *a += b;
            }
            z[m - 1] += e.sign();
            return (rep, z);
        }
        let (rep_h, mut z) = self.rep_rec(h, &lower, m - 1);
        z.push(0);
        let mut rep = cp[..=i].to_vec();
        rep.extend(rep_h);
        (rep, z)
    }

    pub fn britton_reduce(&self, w: &Word) -> NormalForm {
        let word = self.canonical(&w.0);
        let tower_level = self.max_level(&word);
        NormalForm { word: Word(word), tower_level }
    }

    pub fn is_identity(&self, w: &[Letter]) -> bool {
        self.reduce(w).is_empty()
    }

    pub fn equal(&self, g: &[Letter], f: &[Letter]) -> bool {
        let mut w = g.to_vec();
        w.extend(inverse(f));
        self.is_identity(&w)
    }

    pub fn commute(&self, g: &[Letter], f: &[Letter]) -> bool {
        let mut a = g.to_vec();
        a.extend_from_slice(f);
        let mut b = f.to_vec();
        b.extend_from_slice(g);
        self.equal(&a, &b)
    }

    /// Conversion used when moving subgroup elements across a stable letter.
    pub fn phi(&self, level: usize, exps: &[i64], from: Side) -> Vec<Letter> {
        let l = &self.levels[level - 1];
        match from {
            Side::Domain => l.image.word(exps),
            Side::Image => l.domain.word(exps),
        }
    }
}

/// `a` with `p = c^a` for a freely reduced `p` and cyclically reduced `c`.
pub fn cyclic_exponent(p: &[Letter], c: &[Letter]) -> Option<i64> {
    if p.is_empty() {
        return Some(0);
    }
    if c.is_empty() || p.len() % c.len() != 0 {
        return None;
    }
    let a = (p.len() / c.len()) as i64;
    let n = c.len();
    if (0..p.len()).all(|i| p[i] == c[i % n]) {
        return Some(a);
    }
    let ci = inverse(c);
    if (0..p.len()).all(|i| p[i] == ci[i % n]) {
        return Some(-a);
    }
    None
}

/// The exponent `b` minimizing `|p c^b|`, with the reduced product.  Ties
/// go to the smallest product in letter order, so the choice depends only
/// on the coset `p <c>`.
fn best_cyclic_shift(p: &[Letter], c: &[Letter]) -> (i64, Vec<Letter>) {
    let bound = (p.len() / c.len().max(1)) as i64 + 2;
    let mut best: Option<(i64, Vec<Letter>)> = None;
    for b in -bound..=bound {
        let mut w = p.to_vec();
        push_reduced(&mut w, &power(c, b));
        let better = match &best {
            None => true,
            Some((_, cur)) => (w.len(), &w) < (cur.len(), cur),
        };
        if better {
            best = Some((b, w));
        }
    }
    best.unwrap()
}
