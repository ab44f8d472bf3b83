use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::information::Distribution;

/// A rooted tree of labels in canonical form: children are sorted, so two
/// labeled balls related by a root-preserving automorphism are equal.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct LabeledTree {
    label: u32,
    children: Vec<LabeledTree>,
}

impl LabeledTree {
    pub fn new(label: u32, mut children: Vec<LabeledTree>) -> Self {
        children.sort();
        Self { label, children }
    }

    pub fn label(&self) -> u32 {
        self.label
    }

    pub fn children(&self) -> &[LabeledTree] {
        &self.children
    }

    pub fn size(&self) -> usize {
        1 + self.children.iter().map(LabeledTree::size).sum::<usize>()
    }

    /// Every label in the tree, root first.
    pub fn labels(&self) -> Vec<u32> {
        let mut out = Vec::with_capacity(self.size());
        let mut stack = vec![self];
        while let Some(t) = stack.pop() {
            out.push(t.label);
            stack.extend(t.children.iter().rev());
        }
        out
    }
}

type RuleFn = dyn Fn(&LabeledTree) -> u32 + Send + Sync;

/// A radius-`R` local rule: i.i.d. input labels drawn from `input`, output
/// in `outputs`, computed from the canonical labeled ball around a vertex.
#[derive(Clone)]
pub struct BlockFactorRule {
    name: String,
    radius: usize,
    input: Distribution,
    outputs: Vec<String>,
    rule: Arc<RuleFn>,
}

impl fmt::Debug for BlockFactorRule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("BlockFactorRule")
            .field("name", &self.name)
            .field("radius", &self.radius)
            .field("input", &self.input)
            .field("outputs", &self.outputs)
            .finish()
    }
}

impl BlockFactorRule {
    pub fn new(
        name: impl Into<String>,
        radius: usize,
        input: Distribution,
        outputs: Vec<String>,
        rule: impl Fn(&LabeledTree) -> u32 + Send + Sync + 'static,
    ) -> Result<Self> {
        if outputs.is_empty() {
            return Err(Error::InvalidInput("empty output alphabet".into()));
        }
        Ok(Self {
            name: name.into(),
            radius,
            input,
            outputs,
            rule: Arc::new(rule),
        })
    }

    /// The root's own label; `labels` uniform values.
    pub fn identity(labels: usize) -> Result<Self> {
        if labels < 2 {
            return Err(Error::InvalidInput("identity rule needs at least 2 labels".into()));
        }
        Self::new(
            "identity",
            0,
            Distribution::uniform(labels),
            (0..labels).map(|i| i.to_string()).collect(),
            |t| t.label(),
        )
    }

    /// Majority of the uniform bits in `B_R`; a tie goes to the root's bit.
    pub fn majority(radius: usize) -> Result<Self> {
        Self::new("majority", radius, Distribution::uniform(2), bits(), |t| {
            let labels = t.labels();
            let ones = labels.iter().filter(|&&b| b == 1).count();
            let zeros = labels.len() - ones;
            match ones.cmp(&zeros) {
                std::cmp::Ordering::Greater => 1,
                std::cmp::Ordering::Less => 0,
                std::cmp::Ordering::Equal => t.label(),
            }
        })
    }

    /// Sum of the uniform bits in `B_R`, mod 2.
    pub fn parity(radius: usize) -> Result<Self> {
        Self::new("parity", radius, Distribution::uniform(2), bits(), |t| {
            t.labels().iter().sum::<u32>() % 2
        })
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn radius(&self) -> usize {
        self.radius
    }

    pub fn input(&self) -> &Distribution {
        &self.input
    }

    pub fn outputs(&self) -> &[String] {
        &self.outputs
    }

    pub fn apply(&self, ball: &LabeledTree) -> Result<u32> {
        let out = (self.rule)(ball);
        if out as usize >= self.outputs.len() {
            return Err(Error::InvalidInput(format!(
                "rule {} produced {out}, outside its {} outputs",
                self.name,
                self.outputs.len()
            )));
        }
        Ok(out)
    }
}

fn bits() -> Vec<String> {
    vec!["0".into(), "1".into()]
}

/// Rooted ball of radius `R` around `root` in a graph, as a reusable
/// template of vertex indices.
#[derive(Debug, Clone)]
pub(crate) struct BallTemplate {
    vertex: usize,
    children: Vec<BallTemplate>,
}

impl BallTemplate {
    pub(crate) fn new(adjacency: &[Vec<usize>], root: usize, radius: usize) -> Self {
        fn grow(adj: &[Vec<usize>], v: usize, parent: Option<usize>, depth: usize) -> BallTemplate {
            let children = if depth == 0 {
                Vec::new()
            } else {
                adj[v]
                    .iter()
                    .filter(|&&w| Some(w) != parent)
                    .map(|&w| grow(adj, w, Some(v), depth - 1))
                    .collect()
            };
            BallTemplate { vertex: v, children }
        }
        grow(adjacency, root, None, radius)
    }

    pub(crate) fn fill(&self, labels: &[u32]) -> LabeledTree {
        LabeledTree::new(
            labels[self.vertex],
            self.children.iter().map(|c| c.fill(labels)).collect(),
        )
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn star(root: u32, leaves: &[u32]) -> LabeledTree {
        LabeledTree::new(root, leaves.iter().map(|&l| LabeledTree::new(l, vec![])).collect())
    }

    #[test]
    fn canonical_form_ignores_child_order() {
        assert_eq!(star(1, &[0, 1, 0]), star(1, &[1, 0, 0]));
        assert_ne!(star(1, &[0, 1, 0]), star(0, &[1, 0, 1]));
        let a = LabeledTree::new(0, vec![star(1, &[0, 1]), star(0, &[1, 1])]);
        let b = LabeledTree::new(0, vec![star(0, &[1, 1]), star(1, &[1, 0])]);
        assert_eq!(a, b);
    }

    #[test]
    fn majority_breaks_ties_with_root() {
        let m = BlockFactorRule::majority(1).unwrap();
        assert_eq!(m.apply(&star(0, &[1, 1, 0])).unwrap(), 0);
        assert_eq!(m.apply(&star(1, &[1, 0, 0])).unwrap(), 1);
        assert_eq!(m.apply(&star(0, &[1, 1, 1])).unwrap(), 1);
        assert_eq!(m.apply(&star(1, &[0, 0, 0])).unwrap(), 0);
    }

    #[test]
    fn parity_and_identity() {
        let p = BlockFactorRule::parity(1).unwrap();
        assert_eq!(p.apply(&star(1, &[1, 1, 0])).unwrap(), 1);
        let i = BlockFactorRule::identity(3).unwrap();
        assert_eq!(i.apply(&star(2, &[])).unwrap(), 2);
        assert!(BlockFactorRule::identity(1).is_err());
    }

    #[test]
    fn template_fills_in_order() {
        // path 0 - 1 - 2
        let adj = vec![vec![1], vec![0, 2], vec![1]];
        let t = BallTemplate::new(&adj, 1, 1);
        assert_eq!(t.fill(&[5, 6, 7]), star(6, &[5, 7]));
        assert_eq!(t.fill(&[5, 6, 7]).labels().len(), 3);
    }

    #[test]
    fn out_of_range_output_is_an_error() {
        let r = BlockFactorRule::new("bad", 0, Distribution::uniform(2), bits(), |_| 5).unwrap();
        assert!(r.apply(&star(0, &[])).is_err());
    }
}
