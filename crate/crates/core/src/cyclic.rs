//! Cyclic reduction and translation length.
//!
//! A nontrivial element is conjugated towards a cyclically reduced core by
//! peeling matched end letters of a minimal spelling, then by single-letter
//! conjugations and rotations that shorten it.  The core is certified by
//! `l(core^2) = 2 l(core)`; when that fails a bounded conjugator search in
//! the unit-weight ball takes over.

use crate::ball::Ball;
use crate::length::LengthEngine;
use crate::lexvec::LexVec;
use crate::words::{inverse, Letter, WordError};

/// Radius of the conjugator ball used when the greedy passes fail.
pub const FALLBACK_RADIUS: u64 = 4;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CyclicReduction {
    pub core: Vec<Letter>,
    /// `g = conjugator core conjugator^-1`.
    pub conjugator: Vec<Letter>,
    pub certified: bool,
    /// Set when the ball fallback ran.
    pub search_radius: Option<u64>,
}

fn conjugate(x: &[Letter], w: &[Letter]) -> Vec<Letter> {
    // x^-1 w x
    let mut v = inverse(x);
    v.extend_from_slice(w);
    v.extend_from_slice(x);
    v
}

pub fn cyclic_reduce(engine: &LengthEngine, g: &[Letter]) -> Result<CyclicReduction, WordError> {
    let group = engine.group();
    if group.is_identity(g) {
        return Err(WordError::IdentityInput);
    }
    let mut conj: Vec<Letter> = Vec::new();
    let mut w = engine.geodesic(g);
    let mut len = engine.length(&w);

    loop {
        // peel a l_1 ... a^-1
        while w.len() >= 2 && w[0] == w[w.len() - 1].inverse() {
            conj.push(w[0]);
            w = engine.geodesic(&w[1..w.len() - 1]);
            len = engine.length(&w);
        }
        let mut improved = false;
        for a in group.alphabet() {
            let cand = conjugate(&[a], &w);
            let cl = engine.length(&cand);
            if cl < len {
                conj.push(a);
                w = engine.geodesic(&cand);
                len = cl;
                improved = true;
                break;
            }
        }
        if improved {
            continue;
        }
        // rotations: conjugating `u v` by `u` gives `v u`
        let mut rotated = false;
        for i in 1..w.len() {
            let mut cand = w[i..].to_vec();
            cand.extend_from_slice(&w[..i]);
            let cl = engine.length(&cand);
            if cl < len || (cl == len && !engine.is_cyclically_reduced(&w) && engine.is_cyclically_reduced(&cand)) {
                conj.extend_from_slice(&w[..i]);
                w = engine.geodesic(&cand);
                len = cl;
                rotated = true;
                break;
            }
        }
        if !rotated {
            break;
        }
    }
    let conj = group.reduce(&conj);
    if engine.is_cyclically_reduced(&w) {
        return Ok(CyclicReduction { core: w, conjugator: conj, certified: true, search_radius: None });
    }

    let weights = vec![1; group.tower().generator_count()];
    let ball = Ball::build(group, &weights, FALLBACK_RADIUS);
    let mut best: Option<(LexVec, Vec<Letter>, Vec<Letter>)> = None;
    for x in &ball.elements {
        let cand = conjugate(x, &w);
        if !engine.is_cyclically_reduced(&cand) {
            continue;
        }
        let cl = engine.length(&cand);
        if best.as_ref().map_or(true, |b| cl < b.0) {
            best = Some((cl, engine.geodesic(&cand), x.clone()));
        }
    }
    Ok(match best {
        Some((_, core, x)) => {
            let mut c = conj.clone();
            c.extend_from_slice(&x);
            CyclicReduction {
                core,
                conjugator: group.reduce(&c),
                certified: true,
                search_radius: Some(FALLBACK_RADIUS),
            }
        }
        None => CyclicReduction { core: w, conjugator: conj, certified: false, search_radius: Some(FALLBACK_RADIUS) },
    })
}

/// `l_T(g) = l(core)` for the cyclically reduced core of `g`.
pub fn translation_length(engine: &LengthEngine, g: &[Letter]) -> Result<LexVec, WordError> {
    let r = cyclic_reduce(engine, g)?;
    Ok(engine.length(&r.core))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;
    use crate::tower::TowerPresentation;

    fn w(t: &TowerPresentation, s: &str) -> Vec<Letter> {
        t.parse_word(s).unwrap().0
    }

    fn check(t: &TowerPresentation, g: &str, core: &str, conj: &str) {
        let e = LengthEngine::new(t).unwrap();
        let r = cyclic_reduce(&e, &w(t, g)).unwrap();
        assert!(r.certified);
        assert_eq!(t.format_letters(&r.core), core);
        assert_eq!(t.format_letters(&r.conjugator), conj);
        let mut back = r.conjugator.clone();
        back.extend_from_slice(&r.core);
        back.extend(inverse(&r.conjugator));
        assert!(e.group().equal(&back, &w(t, g)));
    }

    #[test]
    fn examples() {
        let f2 = fixtures::f2();
        check(&f2, "x y x^-1", "y", "x");
        check(&f2, "x y", "x y", "");
        check(&fixtures::t1(), "x t x^-1", "t", "x");
    }

    #[test]
    fn identity_is_rejected() {
        let t1 = fixtures::t1();
        let e = LengthEngine::new(&t1).unwrap();
        assert_eq!(cyclic_reduce(&e, &w(&t1, "t t^-1")), Err(WordError::IdentityInput));
    }

    #[test]
    fn translation_lengths() {
        let f2 = fixtures::f2();
        let e = LengthEngine::new(&f2).unwrap();
        assert_eq!(translation_length(&e, &w(&f2, "x y x^-1")).unwrap(), LexVec::from_coords(&[1, 0]));
        assert_eq!(translation_length(&e, &w(&f2, "x y")).unwrap(), LexVec::from_coords(&[2, 0]));
    }
}
