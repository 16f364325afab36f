//! The `Z4 x Z4` Cayley graph that fails the Tinhofer property.
//!
//! Color refinement after individualizing `(0,0)` is replayed round by round
//! and compared with the reference class lists; then the exhaustive checker
//! must find a failing choice sequence.
//!
//! The graph is strongly regular (it is the Shrikhande graph), so the
//! refinement is already stable after round 1 with classes `{(0,0)}`, the
//! six neighbors and the nine non-neighbors. The reference round 2 splits
//! the non-neighbors 5 + 4 and round 3 splits the neighbors 4 + 2, which no
//! refinement invariant under the stabilizer of `(0,0)` can do; [`CounterexampleReport::verify`] reports
//! that mismatch as a diff. The Tinhofer part of the claim does hold.

use serde::Serialize;

use crate::cr::{cr_history, individualize, VertexColoring};
use crate::error::{Error, Result};
use crate::graph::DiGraph;
use crate::graph::z4xz4_counterexample;
use crate::group::GroupSpec;
use crate::partition::OrderedPartition;
use crate::tinhofer::{has_tinhofer_property, has_tinhofer_property_from, TinhoferReport, TinhoferVerdict};

type Class = &'static [(usize, usize)];

const ROUNDS: [&[Class]; 4] = [
    &[
        &[(0, 0)],
        &[
            (0, 1), (0, 2), (0, 3), (1, 0), (1, 1), (1, 2), (1, 3), (2, 0),
            (2, 1), (2, 2), (2, 3), (3, 0), (3, 1), (3, 2), (3, 3),
        ],
    ],
    &[
        &[(0, 0)],
        &[(1, 0), (3, 0), (0, 1), (0, 3), (1, 1), (3, 3)],
        &[(0, 2), (1, 2), (1, 3), (2, 0), (2, 1), (2, 2), (2, 3), (3, 1), (3, 2)],
    ],
    &[
        &[(0, 0)],
        &[(1, 0), (3, 0), (0, 1), (0, 3), (1, 1), (3, 3)],
        &[(0, 2), (1, 3), (2, 0), (2, 2), (3, 1)],
        &[(1, 2), (2, 1), (2, 3), (3, 2)],
    ],
    &[
        &[(0, 0)],
        &[(1, 0), (3, 0), (0, 1), (0, 3)],
        &[(1, 1), (3, 3)],
        &[(0, 2), (1, 3), (2, 0), (3, 1)],
        &[(2, 2)],
        &[(1, 2), (2, 1), (2, 3), (3, 2)],
    ],
];

pub const NODE_BUDGET: usize = 1_000_000;

/// The pairing used in the classical argument: `(0,0)` with itself, then
/// `(1,3)` with `(0,2)`.
pub const REFERENCE_PAIRING: [((usize, usize), (usize, usize)); 2] = [((0, 0), (0, 0)), ((1, 3), (0, 2))];

#[derive(Clone, Debug, Serialize)]
pub struct RoundComparison {
    pub round: usize,
    pub expected: Vec<Vec<String>>,
    /// `None` when refinement stabilized before this round.
    pub computed: Option<Vec<Vec<String>>>,
    pub matches: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct CounterexampleReport {
    pub rounds: Vec<RoundComparison>,
    /// Every partition produced by color refinement, input included.
    pub computed_history: Vec<Vec<Vec<String>>>,
    pub tinhofer: TinhoferReport,
    /// Whether the search restricted to [`REFERENCE_PAIRING`] also fails.
    pub reference_pairing_fails: bool,
}

impl CounterexampleReport {
    pub fn rounds_match(&self) -> bool {
        self.rounds.iter().all(|r| r.matches)
    }

    pub fn first_individualization(&self) -> Option<(usize, usize)> {
        match &self.tinhofer.verdict {
            TinhoferVerdict::Fails { certificate, .. } => certificate.first().copied(),
            _ => None,
        }
    }

    /// All reference claims: the four class lists and the failure of the
    /// property with a certificate that starts at `(0,0)`.
    pub fn verify(&self) -> Result<()> {
        let mut problems = Vec::new();
        for r in self.rounds.iter().filter(|r| !r.matches) {
            problems.push(format!(
                "round {}:\n  expected {:?}\n  computed {}",
                r.round,
                r.expected,
                r.computed
                    .as_ref()
                    .map_or("nothing (already stable)".to_string(), |c| format!("{c:?}"))
            ));
        }
        if self.tinhofer.property() != Some(false) {
            problems.push(format!("expected the property to fail, got {:?}", self.tinhofer.verdict));
        } else if self.first_individualization() != Some((0, 0)) {
            problems.push(format!(
                "certificate starts with {:?}, expected (0, 0)",
                self.first_individualization()
            ));
        }
        if !self.reference_pairing_fails {
            problems.push("the reference pairing does not lead to a failure".to_string());
        }
        if problems.is_empty() {
            Ok(())
        } else {
            Err(Error::Violation(problems.join("\n")))
        }
    }
}

fn expected(spec: &GroupSpec, round: &[Class]) -> OrderedPartition {
    let classes = round
        .iter()
        .map(|c| c.iter().map(|&(a, b)| index(spec, (a, b))).collect())
        .collect();
    OrderedPartition::from_classes(spec.order(), classes).expect("literal is a partition")
}

fn index(spec: &GroupSpec, (a, b): (usize, usize)) -> usize {
    spec.checked_index(&[a, b]).expect("in range")
}

fn describe(spec: &GroupSpec, p: &OrderedPartition) -> Vec<Vec<String>> {
    p.classes()
        .iter()
        .map(|c| c.iter().map(|&x| spec.format_element(x)).collect())
        .collect()
}

pub fn reproduce_counterexample() -> CounterexampleReport {
    let x = z4xz4_counterexample();
    let spec = x.spec.clone();
    let g: DiGraph = x.to_digraph();
    let start = individualize(&VertexColoring::uniform(g.n()), spec.identity());
    let history = cr_history(&g, &start);
    let rounds = ROUNDS
        .iter()
        .enumerate()
        .map(|(k, want)| {
            let want = expected(&spec, want);
            RoundComparison {
                round: k,
                expected: describe(&spec, &want),
                computed: history.get(k).map(|p| describe(&spec, p)),
                matches: history.get(k) == Some(&want),
            }
        })
        .collect();
    let prefix: Vec<(usize, usize)> = REFERENCE_PAIRING
        .iter()
        .map(|&(v, w)| (index(&spec, v), index(&spec, w)))
        .collect();
    let reference = has_tinhofer_property_from(&g, &prefix, NODE_BUDGET);
    CounterexampleReport {
        rounds,
        computed_history: history.iter().map(|p| describe(&spec, p)).collect(),
        tinhofer: has_tinhofer_property(&g, NODE_BUDGET),
        reference_pairing_fails: reference.property() == Some(false),
    }
}
