//! Finite pieces of the `d`-regular tree.
//!
//! Vertices are group elements of `Z_2^{*d}` (or any other signature of the
//! same degree), so distances are word lengths and no second graph
//! representation is needed.

use std::collections::HashMap;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::words::{Letter, Signature, Word};

/// Vertices of the tree are addressed by group elements.
pub type TreeVertex = Word;

/// Default cap on enumerated region sizes.
pub const DEFAULT_BALL_BUDGET: usize = 1_000_000;

/// Graph distance, i.e. the length of `u^{-1} v`.
pub fn dist(u: &TreeVertex, v: &TreeVertex) -> Result<usize> {
    Ok(u.inverse().multiply(v)?.len())
}

/// A vertex at distance `k` from the identity in `Z_2^{*d}`: `a1 a2 a1 a2 ...`.
pub fn vertex_at_distance(d: u32, k: usize) -> Result<TreeVertex> {
    let sig = Signature::involutions(d)?;
    let letters: Vec<Letter> = (0..k).map(|i| Letter::new(1 + (i % 2) as u32)).collect();
    crate::words::reduce(&letters, sig)
}

/// `|B_R(v)| = 1 + d((d-1)^R - 1)/(d-2)`.
pub fn ball_size(d: u32, radius: usize) -> u128 {
    assert!(d >= 3, "ball_size needs d >= 3");
    let d = d as u128;
    1 + d * ((d - 1).pow(radius as u32) - 1) / (d - 2)
}

/// A union of balls, with its induced edges.
#[derive(Debug, Clone, Serialize)]
pub struct BallRegion {
    #[serde(serialize_with = "ser_words")]
    vertices: Vec<TreeVertex>,
    edges: Vec<(usize, usize)>,
    #[serde(serialize_with = "ser_centers")]
    centers: Vec<(TreeVertex, usize)>,
    #[serde(skip)]
    index: HashMap<TreeVertex, usize>,
}

fn ser_words<S: serde::Serializer>(v: &[Word], s: S) -> std::result::Result<S::Ok, S::Error> {
    s.collect_seq(v.iter().map(|w| w.to_string()))
}

fn ser_centers<S: serde::Serializer>(
    v: &[(Word, usize)],
    s: S,
) -> std::result::Result<S::Ok, S::Error> {
    s.collect_seq(v.iter().map(|(w, r)| (w.to_string(), *r)))
}

impl BallRegion {
    /// `B_R(center)`.
    pub fn ball(center: &TreeVertex, radius: usize) -> Result<Self> {
        Self::union(&[(center.clone(), radius)], DEFAULT_BALL_BUDGET)
    }

    /// Union of the given balls; vertices are listed ball by ball in
    /// breadth-first order, so the first center is vertex 0.
    pub fn union(centers: &[(TreeVertex, usize)], budget: usize) -> Result<Self> {
        let sig = centers
            .first()
            .map(|(c, _)| c.signature())
            .ok_or_else(|| Error::InvalidInput("no centers".into()))?;
        let d = sig.degree() as u128;
        let needed: u128 = centers
            .iter()
            .map(|&(_, r)| crate::words::ball_count(d, r))
            .sum();
        if needed > budget as u128 {
            return Err(Error::BudgetExceeded {
                what: "ball region",
                needed,
                budget: budget as u128,
            });
        }
        let mut vertices = Vec::new();
        let mut index = HashMap::new();
        for (center, radius) in centers {
            if center.signature() != sig {
                return Err(Error::SignatureMismatch(
                    sig.to_string(),
                    center.signature().to_string(),
                ));
            }
            for offset in sig.elements_up_to(*radius, usize::MAX)? {
                let v = center.multiply(&offset)?;
                if !index.contains_key(&v) {
                    index.insert(v.clone(), vertices.len());
                    vertices.push(v);
                }
            }
        }
        let alphabet = sig.alphabet();
        let mut edges = Vec::new();
        for (i, v) in vertices.iter().enumerate() {
            for &a in &alphabet {
                let w = v.multiply(&Word::letter(sig, a)?)?;
                if let Some(&j) = index.get(&w) {
                    if i < j {
                        edges.push((i, j));
                    }
                }
            }
        }
        Ok(Self {
            vertices,
            edges,
            centers: centers.to_vec(),
            index,
        })
    }

    pub fn vertices(&self) -> &[TreeVertex] {
        &self.vertices
    }

    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    pub fn centers(&self) -> &[(TreeVertex, usize)] {
        &self.centers
    }

    pub fn len(&self) -> usize {
        self.vertices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }

    pub fn index_of(&self, v: &TreeVertex) -> Option<usize> {
        self.index.get(v).copied()
    }

    pub fn adjacency(&self) -> Vec<Vec<usize>> {
        let mut adj = vec![Vec::new(); self.vertices.len()];
        for &(a, b) in &self.edges {
            adj[a].push(b);
            adj[b].push(a);
        }
        adj
    }

    /// Connected with `|E| = |V| - 1`.
    pub fn is_tree(&self) -> bool {
        if self.vertices.is_empty() || self.edges.len() + 1 != self.vertices.len() {
            return false;
        }
        let adj = self.adjacency();
        let mut seen = vec![false; adj.len()];
        let mut stack = vec![0];
        seen[0] = true;
        let mut count = 1;
        while let Some(x) = stack.pop() {
            for &y in &adj[x] {
                if !seen[y] {
                    seen[y] = true;
                    count += 1;
                    stack.push(y);
                }
            }
        }
        count == adj.len()
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("regions always serialize")
    }
}

/// `|B_R(u) ∩ B_R(v)|` for `dist(u, v) = k`, counted by enumeration.
pub fn ball_intersection_size(d: u32, radius: usize, k: usize) -> Result<u128> {
    let u = Word::identity(Signature::involutions(d)?);
    let v = vertex_at_distance(d, k)?;
    let ball = BallRegion::ball(&u, radius)?;
    let mut count = 0u128;
    for w in ball.vertices() {
        if dist(&v, w)? <= radius {
            count += 1;
        }
    }
    Ok(count)
}

/// Closed form for [`ball_intersection_size`]: classify vertices by their
/// projection onto the `u`-`v` path and their distance from it.
pub fn ball_intersection_size_closed(d: u32, radius: usize, k: usize) -> u128 {
    if k == 0 {
        return ball_size(d, radius);
    }
    let d = d as u128;
    let mut total = 0u128;
    for j in 0..=k {
        for n in 0..=radius {
            if j + n > radius || k - j + n > radius {
                continue;
            }
            total += match (n, j == 0 || j == k) {
                (0, _) => 1,
                (_, true) => (d - 1).pow(n as u32),
                (_, false) => (d - 2) * (d - 1).pow(n as u32 - 1),
            };
        }
    }
    total
}

/// `|B_R(u) ∩ B_R(v)| / |B_R(v)|` for vertices at distance `k`.
pub fn listing_ratio(d: u32, radius: usize, k: usize) -> Result<f64> {
    let inter = if ball_size(d, radius) <= DEFAULT_BALL_BUDGET as u128 {
        ball_intersection_size(d, radius, k)?
    } else {
        ball_intersection_size_closed(d, radius, k)
    };
    Ok(inter as f64 / ball_size(d, radius) as f64)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bounds::beta_k;

    fn sig(d: u32) -> Signature {
        Signature::involutions(d).unwrap()
    }

    #[test]
    fn dist_examples() {
        let s = Signature::new(2, 0).unwrap();
        let g = Word::parse("a1a2", s).unwrap();
        assert_eq!(dist(&g, &g).unwrap(), 0);
        assert_eq!(dist(&Word::identity(s), &g).unwrap(), 2);
        let a1 = Word::parse("a1", s).unwrap();
        let a2 = Word::parse("a2", s).unwrap();
        assert_eq!(dist(&a1, &a2).unwrap(), 2);
        assert!(dist(&a1, &Word::identity(sig(4))).is_err());
    }

    #[test]
    fn ball_examples() {
        let e = Word::identity(sig(3));
        assert_eq!(BallRegion::ball(&e, 0).unwrap().len(), 1);
        assert_eq!(BallRegion::ball(&e, 1).unwrap().len(), 4);
        assert_eq!(BallRegion::ball(&e, 2).unwrap().len(), 10);
        assert_eq!(ball_size(3, 0), 1);
        assert_eq!(ball_size(3, 2), 10);
        assert_eq!(ball_size(4, 3), 53);
        assert!(BallRegion::union(&[(e, 30)], 1000).is_err());
    }

    #[test]
    fn ball_size_matches_enumeration() {
        for d in 3..=6 {
            let e = Word::identity(sig(d));
            for r in 0..=6 {
                if ball_size(d, r) > 200_000 {
                    continue;
                }
                assert_eq!(BallRegion::ball(&e, r).unwrap().len() as u128, ball_size(d, r));
            }
        }
    }

    #[test]
    fn balls_are_trees() {
        for d in 3..=5 {
            for r in 0..=5 {
                let e = Word::identity(sig(d));
                let b = BallRegion::ball(&e, r).unwrap();
                assert!(b.is_tree(), "d={d} r={r}");
            }
        }
        // also for a free-group addressing of T_4
        let f2 = Signature::new(2, 0).unwrap();
        assert!(BallRegion::ball(&Word::identity(f2), 4).unwrap().is_tree());
    }

    #[test]
    fn union_of_two_balls_is_a_tree() {
        let u = Word::identity(sig(3));
        let v = vertex_at_distance(3, 3).unwrap();
        let region = BallRegion::union(&[(u.clone(), 2), (v.clone(), 2)], 10_000).unwrap();
        assert!(region.is_tree());
        assert_eq!(region.len() as u128, 2 * ball_size(3, 2) - ball_intersection_size(3, 2, 3).unwrap());
        assert_eq!(region.index_of(&u), Some(0));
        for w in region.vertices() {
            assert!(dist(&u, w).unwrap() <= 2 || dist(&v, w).unwrap() <= 2);
        }
    }

    #[test]
    fn dist_is_a_metric_on_b3() {
        for d in [3u32, 4] {
            let e = Word::identity(sig(d));
            let b = BallRegion::ball(&e, 3).unwrap();
            let vs = b.vertices();
            let n = vs.len();
            let mut m = vec![vec![0usize; n]; n];
            for i in 0..n {
                for j in 0..n {
                    m[i][j] = dist(&vs[i], &vs[j]).unwrap();
                }
            }
            for i in 0..n {
                assert_eq!(m[i][i], 0);
                for j in 0..n {
                    assert_eq!(m[i][j], m[j][i]);
                    if i != j {
                        assert!(m[i][j] > 0);
                    }
                    for k in 0..n {
                        assert!(m[i][k] <= m[i][j] + m[j][k]);
                    }
                }
            }
        }
    }

    #[test]
    fn intersection_examples() {
        assert_eq!(ball_intersection_size(3, 2, 0).unwrap(), ball_size(3, 2));
        assert_eq!(ball_intersection_size(3, 2, 2).unwrap(), 4);
        assert_eq!(ball_intersection_size(3, 2, 1).unwrap(), 6);
        assert_eq!(ball_intersection_size(3, 2, 5).unwrap(), 0);
    }

    #[test]
    fn closed_form_matches_enumeration() {
        for d in 3..=5 {
            for r in 0..=5 {
                for k in 0..=2 * r + 1 {
                    assert_eq!(
                        ball_intersection_size_closed(d, r, k),
                        ball_intersection_size(d, r, k).unwrap(),
                        "d={d} r={r} k={k}"
                    );
                }
            }
        }
    }

    #[test]
    fn listing_ratio_examples() {
        assert!((listing_ratio(3, 2, 1).unwrap() - 0.6).abs() < 1e-15);
        assert_eq!(listing_ratio(4, 3, 0).unwrap(), 1.0);
        assert!((listing_ratio(3, 12, 1).unwrap() - 2.0 / 3.0).abs() < 1e-3);
    }

    #[test]
    fn listing_gap_shrinks_towards_beta() {
        for d in [3u32, 4] {
            for k in 1..=4usize {
                let mut prev = f64::INFINITY;
                for r in k..=8 {
                    let gap = (listing_ratio(d, r, k).unwrap() - beta_k(d, k).unwrap()).abs();
                    assert!(gap <= prev, "d={d} k={k} r={r}");
                    prev = gap;
                }
                if d == 4 {
                    assert!(prev < 0.02);
                }
            }
        }
    }

    #[test]
    fn region_json() {
        let e = Word::identity(sig(3));
        let v: serde_json::Value =
            serde_json::from_str(&BallRegion::ball(&e, 1).unwrap().to_json()).unwrap();
        assert_eq!(v["vertices"][0], "e");
        assert_eq!(v["edges"].as_array().unwrap().len(), 3);
        assert_eq!(v["centers"][0][1], 1);
    }
}
