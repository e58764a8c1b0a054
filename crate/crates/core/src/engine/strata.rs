//! Predicate dependency graph and stratification.

use std::collections::{BTreeMap, BTreeSet, VecDeque};
use std::fmt;

use crate::syntax::{Literal, Predicate, Program};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum EdgeKind {
    Positive,
    /// Dependency through `not` or a count condition.
    Test,
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct DependencyEdge {
    pub head: Predicate,
    pub body: Predicate,
    pub kind: EdgeKind,
}

/// Edges point from a rule's head predicate to the predicates its body
/// depends on. Comparisons contribute nothing.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct DependencyGraph {
    pub predicates: BTreeSet<Predicate>,
    pub edges: BTreeSet<DependencyEdge>,
}

impl DependencyGraph {
    pub fn successors<'a>(
        &'a self,
        p: &'a Predicate,
    ) -> impl Iterator<Item = &'a DependencyEdge> + 'a {
        self.edges.iter().filter(move |e| &e.head == p)
    }

    pub fn has_edge(&self, head: &str, body: &str, kind: EdgeKind) -> bool {
        self.edges
            .iter()
            .any(|e| e.head.name == head && e.body.name == body && e.kind == kind)
    }
}

pub fn dependency_graph(program: &Program) -> DependencyGraph {
    let mut g = DependencyGraph::default();
    for rule in &program.statements {
        let head = rule.head.signature();
        g.predicates.insert(head.clone());
        for lit in &rule.body {
            let (atom, kind) = match lit {
                Literal::Positive(a) => (a, EdgeKind::Positive),
                Literal::Negated(a) => (a, EdgeKind::Test),
                Literal::CountEquality { condition, .. } => (condition, EdgeKind::Test),
                Literal::Comparison { .. } => continue,
            };
            let body = atom.signature();
            g.predicates.insert(body.clone());
            g.edges.insert(DependencyEdge {
                head: head.clone(),
                body,
                kind,
            });
        }
    }
    g
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StratificationResult {
    pub strata: BTreeMap<Predicate, usize>,
    /// Predicates grouped by stratum, lowest first.
    pub order: Vec<Vec<Predicate>>,
}

impl StratificationResult {
    pub fn stratum(&self, p: &Predicate) -> Option<usize> {
        self.strata.get(p).copied()
    }

    pub fn stratum_of(&self, name: &str, arity: usize) -> Option<usize> {
        self.stratum(&Predicate::new(name, arity))
    }

    pub fn len(&self) -> usize {
        self.order.len()
    }

    pub fn is_empty(&self) -> bool {
        self.order.is_empty()
    }
}

/// A dependency cycle that passes through at least one test edge. The
/// first predicate is repeated at the end.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub struct UnstratifiableError {
    pub cycle: Vec<Predicate>,
}

impl fmt::Display for UnstratifiableError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("program is not stratified; recursion through a test literal: ")?;
        for (i, p) in self.cycle.iter().enumerate() {
            if i > 0 {
                f.write_str(" -> ")?;
            }
            write!(f, "{p}")?;
        }
        Ok(())
    }
}

/// Least strata assignment: heads sit at or above positive dependencies and
/// strictly above test dependencies.
pub fn stratify(program: &Program) -> Result<StratificationResult, UnstratifiableError> {
    stratify_graph(&dependency_graph(program))
}

pub fn stratify_graph(
    graph: &DependencyGraph,
) -> Result<StratificationResult, UnstratifiableError> {
    if let Some(cycle) = find_test_cycle(graph) {
        return Err(UnstratifiableError { cycle });
    }

    let mut strata: BTreeMap<Predicate, usize> =
        graph.predicates.iter().map(|p| (p.clone(), 0)).collect();
    // Without a cycle through a test edge the longest-path iteration
    // converges after at most |predicates| passes.
    loop {
        let mut changed = false;
        for e in &graph.edges {
            let need = strata[&e.body] + usize::from(e.kind == EdgeKind::Test);
            let cur = strata.get_mut(&e.head).expect("head registered");
            if *cur < need {
                *cur = need;
                changed = true;
            }
        }
        if !changed {
            break;
        }
    }

    let height = strata.values().max().map_or(0, |m| m + 1);
    let mut order = vec![Vec::new(); height];
    for (p, &s) in &strata {
        order[s].push(p.clone());
    }
    Ok(StratificationResult { strata, order })
}

/// Finds a cycle through a test edge, taking test edges in sorted order so
/// the reported cycle is deterministic.
fn find_test_cycle(graph: &DependencyGraph) -> Option<Vec<Predicate>> {
    for e in graph.edges.iter().filter(|e| e.kind == EdgeKind::Test) {
        if let Some(path) = shortest_path(graph, &e.body, &e.head) {
            let mut cycle = vec![e.head.clone()];
            cycle.extend(path);
            return Some(cycle);
        }
    }
    None
}

fn shortest_path(
    graph: &DependencyGraph,
    from: &Predicate,
    to: &Predicate,
) -> Option<Vec<Predicate>> {
    let mut prev: BTreeMap<&Predicate, Option<&Predicate>> = BTreeMap::new();
    let mut queue = VecDeque::from([from]);
    prev.insert(from, None);
    while let Some(p) = queue.pop_front() {
        if p == to {
            let mut path = vec![p.clone()];
            let mut cur = p;
            while let Some(Some(q)) = prev.get(cur) {
                path.push((*q).clone());
                cur = q;
            }
            path.reverse();
            return Some(path);
        }
        for e in graph.successors(p) {
            if !prev.contains_key(&e.body) {
                prev.insert(&e.body, Some(p));
                queue.push_back(&e.body);
            }
        }
    }
    None
}
