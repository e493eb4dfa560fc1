//! Positive integer generator weights with equal weight on both sides of
//! every associated pair, and the weighted word metric they induce.
//!
//! The equations are homogeneous, so a strictly positive solution exists iff
//! the nullspace meets the open positive orthant.  That is decided exactly
//! by Fourier-Motzkin elimination over the rationals; the canonical
//! solution is then the least-sum integer point, ties broken
//! lexicographically in generator order.

use indexmap::IndexMap;
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::ball::Ball;
use crate::lexvec::LexVec;
use crate::tower::TowerPresentation;
use crate::words::{Group, Letter};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum WeightsError {
    #[error("Infeasible: no positive weights satisfy the equations of generators {0:?}")]
    Infeasible(Vec<String>),
    #[error("BallExceeded: element outside the radius-{0} ball")]
    BallExceeded(u64),
}

/// One equation per nontrivial associated pair: the letter counts of the
/// two words, by generator index.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Equation {
    pub level: usize,
    pub pair: usize,
    pub left: Vec<u64>,
    pub right: Vec<u64>,
}

impl Equation {
    fn coefficients(&self) -> Vec<i64> {
        self.left.iter().zip(&self.right).map(|(&a, &b)| a as i64 - b as i64).collect()
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConstraintSystem {
    pub variables: Vec<String>,
    pub equations: Vec<Equation>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct WeightSystem {
    pub weights: IndexMap<String, u64>,
}

impl WeightSystem {
    pub fn unit(tower: &TowerPresentation) -> WeightSystem {
        WeightSystem { weights: tower.generators.iter().map(|g| (g.name.clone(), 1)).collect() }
    }

    /// Weights by generator index.
    pub fn as_vec(&self) -> Vec<u64> {
        self.weights.values().copied().collect()
    }

    pub fn get(&self, name: &str) -> Option<u64> {
        self.weights.get(name).copied()
    }

    /// Sum of letter weights of a word.
    pub fn word_weight(&self, w: &[Letter]) -> u64 {
        let v = self.as_vec();
        w.iter().map(|l| v[l.gen()]).sum()
    }
}

fn counts(w: &[Letter], n: usize) -> Vec<u64> {
    let mut c = vec![0u64; n];
    for l in w {
        c[l.gen()] += 1;
    }
    c
}

pub fn build_constraints(tower: &TowerPresentation) -> ConstraintSystem {
    let n = tower.generator_count();
    let mut equations = Vec::new();
    for (i, level) in tower.levels.iter().enumerate() {
        for (k, pair) in level.assoc.iter().enumerate() {
            let left = counts(&pair.gen_word.0, n);
            let right = counts(&pair.image_word.0, n);
            if left != right {
                equations.push(Equation { level: i + 1, pair: k + 1, left, right });
            }
        }
    }
    ConstraintSystem { variables: tower.generators.iter().map(|g| g.name.clone()).collect(), equations }
}

type Q = BigRational;

fn q(x: i64) -> Q {
    Q::from_integer(BigInt::from(x))
}

/// Reduced row echelon form in place; returns the pivot columns.
fn rref(rows: &mut Vec<Vec<Q>>, cols: usize) -> Vec<usize> {
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        let Some(p) = (r..rows.len()).find(|&i| !rows[i][c].is_zero()) else { continue };
        rows.swap(r, p);
        let inv = rows[r][c].recip();
        for x in rows[r].iter_mut() {
            *x = &*x * &inv;
        }
        for i in 0..rows.len() {
            if i != r && !rows[i][c].is_zero() {
                let f = rows[i][c].clone();
                for j in 0..cols {
                    let d = &f * &rows[r][j];
                    rows[i][j] = &rows[i][j] - d;
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    rows.truncate(r);
    pivots
}

/// Whether `{x : a.x >= b for every (a, b)}` is nonempty over the rationals.
fn fourier_motzkin(mut ineqs: Vec<(Vec<Q>, Q)>, vars: usize) -> bool {
    for v in 0..vars {
        let (mut pos, mut neg, mut rest) = (Vec::new(), Vec::new(), Vec::new());
        for (a, b) in ineqs {
            if a[v].is_positive() {
                pos.push((a, b));
            } else if a[v].is_negative() {
                neg.push((a, b));
            } else {
                rest.push((a, b));
            }
        }
        for (ap, bp) in &pos {
            for (an, bn) in &neg {
                // scale so the v coefficients cancel
                let (sp, sn) = (-an[v].clone(), ap[v].clone());
                let a: Vec<Q> = ap.iter().zip(an).map(|(x, y)| x * &sp + y * &sn).collect();
                let b = bp * &sp + bn * &sn;
                rest.push((a, b));
            }
        }
        rest.sort();
        rest.dedup();
        ineqs = rest;
    }
    ineqs.iter().all(|(_, b)| !b.is_positive())
}

/// Least-sum positive integer solution of one connected block, ties broken
/// lexicographically; `None` when infeasible.
fn solve_block(eqs: &[Vec<i64>]) -> Option<Vec<u64>> {
    let d = eqs[0].len();
    let mut rows: Vec<Vec<Q>> = eqs.iter().map(|e| e.iter().map(|&x| q(x)).collect()).collect();
    let pivots = rref(&mut rows, d);
    let free: Vec<usize> = (0..d).filter(|c| !pivots.contains(c)).collect();
    if free.is_empty() {
        return None;
    }
    // x_p = -sum_f r_pf x_f for pivots; positivity of every variable
    let k = free.len();
    let mut ineqs: Vec<(Vec<Q>, Q)> = Vec::new();
    for (fi, _) in free.iter().enumerate() {
        let mut a = vec![Q::zero(); k];
        a[fi] = Q::one();
        ineqs.push((a, Q::one()));
    }
    for row in &rows {
        let a: Vec<Q> = free.iter().map(|&f| -row[f].clone()).collect();
        ineqs.push((a, Q::one()));
    }
    if !fourier_motzkin(ineqs, k) {
        return None;
    }

    // a solution exists, so increasing the total eventually finds one
    let mut total = d as u64;
    loop {
        let mut best: Option<Vec<u64>> = None;
        let mut assign = vec![0u64; k];
        search_free(&rows, &pivots, &free, d, total, 0, &mut assign, &mut best);
        if best.is_some() {
            return best;
        }
        total += 1;
    }
}

#[allow(clippy::too_many_arguments)]
fn search_free(
    rows: &[Vec<Q>],
    pivots: &[usize],
    free: &[usize],
    d: usize,
    total: u64,
    i: usize,
    assign: &mut Vec<u64>,
    best: &mut Option<Vec<u64>>,
) {
    if i == free.len() {
        let mut x = vec![0u64; d];
        for (fi, &f) in free.iter().enumerate() {
            x[f] = assign[fi];
        }
        for (row, &p) in rows.iter().zip(pivots) {
            let mut v = Q::zero();
            for (fi, &f) in free.iter().enumerate() {
                v -= &row[f] * q(assign[fi] as i64);
            }
            if !v.is_integer() || !v.is_positive() {
                return;
            }
            x[p] = v.to_integer().to_u64().expect("weight fits in u64");
        }
        if x.iter().sum::<u64>() == total && best.as_ref().map_or(true, |b| x < *b) {
            *best = Some(x);
        }
        return;
    }
    let used: u64 = assign[..i].iter().sum();
    let remaining = free.len() - i - 1;
    let cap = total.saturating_sub(used + remaining as u64 + pivots.len() as u64);
    for v in 1..=cap {
        assign[i] = v;
        search_free(rows, pivots, free, d, total, i + 1, assign, best);
    }
    assign[i] = 0;
}

pub fn solve_weights(cs: &ConstraintSystem) -> Result<WeightSystem, WeightsError> {
    let n = cs.variables.len();
    let coeffs: Vec<Vec<i64>> = cs.equations.iter().map(Equation::coefficients).collect();

    // connected blocks of variables sharing an equation
    let mut parent: Vec<usize> = (0..n).collect();
    fn find(p: &mut [usize], x: usize) -> usize {
        let mut r = x;
        while p[r] != r {
            r = p[r];
        }
        p[x] = r;
        r
    }
    for e in &coeffs {
        let vars: Vec<usize> = (0..n).filter(|&j| e[j] != 0).collect();
        for w in vars.windows(2) {
            let (a, b) = (find(&mut parent, w[0]), find(&mut parent, w[1]));
            parent[a] = b;
        }
    }

    let mut weights = vec![1u64; n];
    let mut done = vec![false; n];
    for v in 0..n {
        let root = find(&mut parent, v);
        if done[root] {
            continue;
        }
        done[root] = true;
        let block: Vec<usize> = (0..n).filter(|&j| find(&mut parent, j) == root).collect();
        let eqs: Vec<Vec<i64>> = coeffs
            .iter()
            .filter(|e| block.iter().any(|&j| e[j] != 0))
            .map(|e| block.iter().map(|&j| e[j]).collect())
            .collect();
        if eqs.is_empty() {
            continue;
        }
        let sol = solve_block(&eqs)
            .ok_or_else(|| WeightsError::Infeasible(block.iter().map(|&j| cs.variables[j].clone()).collect()))?;
        for (&j, w) in block.iter().zip(sol) {
            weights[j] = w;
        }
    }
    Ok(WeightSystem { weights: cs.variables.iter().cloned().zip(weights).collect() })
}

/// Weighted distance from the identity, by Dijkstra over the ball.
pub fn weighted_length(h: &[Letter], ws: &WeightSystem, group: &Group, radius: u64) -> Result<u64, WeightsError> {
    let ball = Ball::build(group, &ws.as_vec(), radius);
    ball.index_of(group, h).map(|i| ball.distance[i]).ok_or(WeightsError::BallExceeded(radius))
}

/// Right-lexicographic shortest-path distance with the generator lengths
/// as edge weights, over the unit-weight ball of the given radius.
pub fn lex_shortest_length(h: &[Letter], group: &Group, radius: u64) -> Result<LexVec, WeightsError> {
    let tower = group.tower();
    let ball = Ball::build(group, &vec![1; tower.generator_count()], radius);
    let i = ball.index_of(group, h).ok_or(WeightsError::BallExceeded(radius))?;
    Ok(ball.lex_distances(&tower.lengths).swap_remove(i))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;

    fn system(vars: &[&str], eqs: &[(&[u64], &[u64])]) -> ConstraintSystem {
        ConstraintSystem {
            variables: vars.iter().map(|s| s.to_string()).collect(),
            equations: eqs
                .iter()
                .enumerate()
                .map(|(k, (l, r))| Equation { level: 1, pair: k + 1, left: l.to_vec(), right: r.to_vec() })
                .collect(),
        }
    }

    #[test]
    fn constraint_examples() {
        assert!(build_constraints(&fixtures::f2()).equations.is_empty());
        assert!(build_constraints(&fixtures::t1()).equations.is_empty());
        let cs = build_constraints(&fixtures::t2());
        assert_eq!(cs.equations.len(), 1);
        assert_eq!(cs.equations[0].left, vec![2, 1, 0]);
        assert_eq!(cs.equations[0].right, vec![1, 2, 0]);
    }

    #[test]
    fn solver_examples() {
        let ws = solve_weights(&system(&["x", "y"], &[])).unwrap();
        assert_eq!(ws.as_vec(), vec![1, 1]);
        let ws = solve_weights(&build_constraints(&fixtures::t2())).unwrap();
        assert_eq!(serde_json::to_string(&ws).unwrap(), r#"{"x":1,"y":1,"t":1}"#);
        let cs = system(&["x", "y"], &[(&[1, 0], &[1, 1])]);
        assert_eq!(solve_weights(&cs), Err(WeightsError::Infeasible(vec!["y".into()])));
        assert!(matches!(
            solve_weights(&build_constraints(&fixtures::t2_broken())),
            Err(WeightsError::Infeasible(_))
        ));
    }

    #[test]
    fn least_sum_then_lex() {
        // 2a = 3b
        let ws = solve_weights(&system(&["a", "b"], &[(&[2, 0], &[0, 3])])).unwrap();
        assert_eq!(ws.as_vec(), vec![3, 2]);
        // a + b = 2c: sum 3 only at (1, 1, 1)
        let ws = solve_weights(&system(&["a", "b", "c"], &[(&[1, 1, 0], &[0, 0, 2])])).unwrap();
        assert_eq!(ws.as_vec(), vec![1, 1, 1]);
        // a + 3b = 2c: least sum 4
        let ws = solve_weights(&system(&["a", "b", "c"], &[(&[1, 3, 0], &[0, 0, 2])])).unwrap();
        assert_eq!(ws.as_vec(), vec![1, 1, 2]);
        // a = b + c and b = 2c force (3, 2, 1)
        let ws = solve_weights(&system(&["a", "b", "c"], &[(&[1, 0, 0], &[0, 1, 1]), (&[0, 1, 0], &[0, 0, 2])])).unwrap();
        assert_eq!(ws.as_vec(), vec![3, 2, 1]);
    }

    #[test]
    fn fourier_motzkin_detects_empty_cone() {
        // a + b = 0 with a, b >= 1
        assert_eq!(solve_block(&[vec![1, 1]]), None);
        // a - b + c = 0, a - c = 0  => b = 2a
        assert_eq!(solve_block(&[vec![1, -1, 1], vec![1, 0, -1]]), Some(vec![1, 2, 1]));
    }

    #[test]
    fn metric_examples() {
        let f2 = fixtures::f2();
        let g = Group::new(&f2).unwrap();
        let ws = WeightSystem::unit(&f2);
        assert_eq!(weighted_length(&[], &ws, &g, 3), Ok(0));
        assert_eq!(weighted_length(&f2.parse_word("x x y").unwrap().0, &ws, &g, 3), Ok(3));
        assert_eq!(weighted_length(&f2.parse_word("x x y x").unwrap().0, &ws, &g, 3), Err(WeightsError::BallExceeded(3)));
        assert_eq!(lex_shortest_length(&f2.parse_word("x y").unwrap().0, &g, 3).unwrap().coords(), &[2, 0]);

        let t1 = fixtures::t1();
        let g = Group::new(&t1).unwrap();
        let ws = WeightSystem::unit(&t1);
        assert_eq!(weighted_length(&t1.parse_word("t^-1 x y t").unwrap().0, &ws, &g, 4), Ok(2));
        assert_eq!(lex_shortest_length(&t1.parse_word("t").unwrap().0, &g, 4).unwrap().coords(), &[0, 1]);
    }
}
