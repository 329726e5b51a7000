use std::collections::{BTreeMap, BTreeSet};

use serde::Serialize;

use super::{EntityKind, KnowledgeGraph, RelationKind, Triple};

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "finding", rename_all = "snake_case")]
pub enum Finding {
    DanglingReference { triple: Triple, missing: String },
    DomainRangeViolation { triple: Triple },
    GeneralizesCycle { members: Vec<String> },
    EmptyLabel { id: String },
    QuantityWithoutKind { quantity: String },
}

/// Integrity errors plus curation warnings; both empty on a healthy graph.
#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize)]
pub struct GraphReport {
    pub errors: Vec<Finding>,
    pub warnings: Vec<Finding>,
}

impl GraphReport {
    pub fn is_empty(&self) -> bool {
        self.errors.is_empty() && self.warnings.is_empty()
    }

    pub fn has_errors(&self) -> bool {
        !self.errors.is_empty()
    }
}

impl KnowledgeGraph {
    pub fn validate(&self) -> GraphReport {
        let mut report = GraphReport::default();
        for e in self.entities.values() {
            if e.label.trim().is_empty() {
                report.errors.push(Finding::EmptyLabel { id: e.id.clone() });
            }
        }
        for t in &self.relations {
            let src = self.entities.get(&t.src);
            let dst = self.entities.get(&t.dst);
            for (end, id) in [(src, &t.src), (dst, &t.dst)] {
                if end.is_none() {
                    report.errors.push(Finding::DanglingReference { triple: t.clone(), missing: id.clone() });
                }
            }
            if let (Some(s), Some(d)) = (src, dst) {
                if s.kind != t.relation.domain() || d.kind != t.relation.range() {
                    report.errors.push(Finding::DomainRangeViolation { triple: t.clone() });
                }
            }
        }
        for members in self.generalizes_cycles() {
            report.errors.push(Finding::GeneralizesCycle { members });
        }
        for q in self.entities.values().filter(|e| e.kind == EntityKind::Quantity) {
            let has_kind = self
                .relations
                .iter()
                .any(|t| t.src == q.id && t.relation == RelationKind::HasQuantityKind);
            if !has_kind {
                report.warnings.push(Finding::QuantityWithoutKind { quantity: q.id.clone() });
            }
        }
        report
    }

    /// Strongly connected components of the generalizes subgraph that contain
    /// a cycle, each sorted, in sorted order.
    fn generalizes_cycles(&self) -> Vec<Vec<String>> {
        let mut adj: BTreeMap<&str, Vec<&str>> = BTreeMap::new();
        let mut self_loops = BTreeSet::new();
        for t in self.relations.iter().filter(|t| t.relation == RelationKind::Generalizes) {
            adj.entry(t.src.as_str()).or_default().push(t.dst.as_str());
            adj.entry(t.dst.as_str()).or_default();
            if t.src == t.dst {
                self_loops.insert(t.src.as_str());
            }
        }

        // Tarjan, iterative
        let nodes: Vec<&str> = adj.keys().copied().collect();
        let index_of: BTreeMap<&str, usize> = nodes.iter().enumerate().map(|(i, n)| (*n, i)).collect();
        let succ: Vec<Vec<usize>> = nodes.iter().map(|n| adj[n].iter().map(|d| index_of[d]).collect()).collect();
        let n = nodes.len();
        let mut index = vec![usize::MAX; n];
        let mut low = vec![0; n];
        let mut on_stack = vec![false; n];
        let mut stack = Vec::new();
        let mut counter = 0;
        let mut cycles = Vec::new();

        for root in 0..n {
            if index[root] != usize::MAX {
                continue;
            }
            let mut work: Vec<(usize, usize)> = vec![(root, 0)];
            while let Some(&(v, next)) = work.last() {
                if next == 0 && index[v] == usize::MAX {
                    index[v] = counter;
                    low[v] = counter;
                    counter += 1;
                    stack.push(v);
                    on_stack[v] = true;
                }
                if next < succ[v].len() {
                    let w = succ[v][next];
                    if let Some(top) = work.last_mut() {
                        top.1 += 1;
                    }
                    if index[w] == usize::MAX {
                        work.push((w, 0));
                    } else if on_stack[w] {
                        low[v] = low[v].min(index[w]);
                    }
                    continue;
                }
                work.pop();
                if let Some(&(parent, _)) = work.last() {
                    low[parent] = low[parent].min(low[v]);
                }
                if low[v] == index[v] {
                    let mut comp = Vec::new();
                    loop {
                        let w = stack.pop().expect("tarjan stack");
                        on_stack[w] = false;
                        comp.push(nodes[w].to_string());
                        if w == v {
                            break;
                        }
                    }
                    if comp.len() > 1 || self_loops.contains(nodes[v]) {
                        comp.sort();
                        cycles.push(comp);
                    }
                }
            }
        }
        cycles.sort();
        cycles
    }
}
