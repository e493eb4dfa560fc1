//! Balls in weighted Cayley graphs, with vertices identified by canonical
//! normal forms.

use std::cmp::Reverse;
use std::collections::{BinaryHeap, HashMap};

use crate::lexvec::LexVec;
use crate::words::{Group, Letter};

/// The ball of a given radius around the identity for integer edge
/// weights, with shortest-path distances and the induced edges.
#[derive(Debug, Clone)]
pub struct Ball {
    pub radius: u64,
    pub weights: Vec<u64>,
    /// Canonical normal forms, in order of discovery distance.
    pub elements: Vec<Vec<Letter>>,
    pub distance: Vec<u64>,
    /// `(letter, parent)` on a shortest path; the identity has none.
    pub parent: Vec<Option<(Letter, usize)>>,
    /// Edges `v --a--> w` with both ends in the ball.
    pub edges: Vec<Vec<(Letter, usize)>>,
    index: HashMap<Vec<Letter>, usize>,
}

impl Ball {
    pub fn build(group: &Group, weights: &[u64], radius: u64) -> Ball {
        assert!(weights.iter().all(|&w| w >= 1), "edge weights must be positive");
        let alphabet = group.alphabet();
        let mut elements: Vec<Vec<Letter>> = vec![Vec::new()];
        let mut distance = vec![0u64];
        let mut parent = vec![None];
        let mut index: HashMap<Vec<Letter>, usize> = HashMap::from([(Vec::new(), 0)]);
        let mut settled = vec![false];
        let mut raw_edges: Vec<Vec<(Letter, Vec<Letter>)>> = vec![Vec::new()];
        let mut heap = BinaryHeap::from([Reverse((0u64, 0usize))]);
        while let Some(Reverse((d, v))) = heap.pop() {
            if settled[v] || d > distance[v] {
                continue;
            }
            settled[v] = true;
            let mut out = Vec::with_capacity(alphabet.len());
            for &a in &alphabet {
                let mut w = elements[v].clone();
                w.push(a);
                let nf = group.canonical(&w);
                let nd = d + weights[a.gen()];
                if nd <= radius {
                    match index.get(&nf) {
                        Some(&u) => {
                            if nd < distance[u] {
                                distance[u] = nd;
                                parent[u] = Some((a, v));
                                heap.push(Reverse((nd, u)));
                            }
                        }
                        None => {
                            let u = elements.len();
                            index.insert(nf.clone(), u);
                            elements.push(nf.clone());
                            distance.push(nd);
                            parent.push(Some((a, v)));
                            settled.push(false);
                            raw_edges.push(Vec::new());
                            heap.push(Reverse((nd, u)));
                        }
                    }
                }
                out.push((a, nf));
            }
            raw_edges[v] = out;
        }
        let edges = raw_edges
            .into_iter()
            .map(|row| row.into_iter().filter_map(|(a, nf)| index.get(&nf).map(|&u| (a, u))).collect())
            .collect();
        Ball { radius, weights: weights.to_vec(), elements, distance, parent, edges, index }
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    /// Index of an element given by its canonical normal form.
    pub fn index_of_canonical(&self, nf: &[Letter]) -> Option<usize> {
        self.index.get(nf).copied()
    }

    pub fn index_of(&self, group: &Group, w: &[Letter]) -> Option<usize> {
        self.index_of_canonical(&group.canonical(w))
    }

    /// A shortest word for the element, read off the parent pointers.
    pub fn path_word(&self, mut v: usize) -> Vec<Letter> {
        let mut rev = Vec::new();
        while let Some((a, p)) = self.parent[v] {
            rev.push(a);
            v = p;
        }
        rev.reverse();
        rev
    }

    /// Indices of elements at distance at most `r`.
    pub fn within(&self, r: u64) -> Vec<usize> {
        (0..self.len()).filter(|&i| self.distance[i] <= r).collect()
    }

    /// Shortest-path distances for `Z^n` edge weights on the induced
    /// subgraph; valid because positive weights in the right-lex order are
    /// compatible with addition.
    pub fn lex_distances(&self, lengths: &[LexVec]) -> Vec<LexVec> {
        let n = lengths[0].rank();
        let mut dist: Vec<Option<LexVec>> = vec![None; self.len()];
        dist[0] = Some(LexVec::zero(n));
        let mut heap = BinaryHeap::from([Reverse((LexVec::zero(n), 0usize))]);
        let mut done = vec![false; self.len()];
        while let Some(Reverse((d, v))) = heap.pop() {
            if done[v] {
                continue;
            }
            done[v] = true;
            for &(a, u) in &self.edges[v] {
                let nd = &d + &lengths[a.gen()];
                if dist[u].as_ref().map_or(true, |cur| nd < *cur) {
                    dist[u] = Some(nd.clone());
                    heap.push(Reverse((nd, u)));
                }
            }
        }
        dist.into_iter().map(|d| d.expect("ball is connected")).collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;

    #[test]
    fn free_ball_sizes() {
        let g = Group::new(&fixtures::f2()).unwrap();
        let b = Ball::build(&g, &[1, 1], 3);
        // 1 + 4 + 12 + 36
        assert_eq!(b.len(), 53);
        let b = Ball::build(&g, &[2, 1], 2);
        // identity, y, y^-1, x, x^-1, y y, y^-1 y^-1
        assert_eq!(b.len(), 7);
    }

    #[test]
    fn pinches_are_identified() {
        let t1 = fixtures::t1();
        let g = Group::new(&t1).unwrap();
        let b = Ball::build(&g, &[1, 1, 1], 4);
        let i = b.index_of(&g, &t1.parse_word("t^-1 x y t").unwrap().0).unwrap();
        assert_eq!(b.distance[i], 2);
        assert_eq!(b.path_word(i).len(), 2);
    }
}
