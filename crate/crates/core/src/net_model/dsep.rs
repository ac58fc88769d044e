use std::collections::VecDeque;

use super::NetworkSpec;
use crate::error::{Error, Result};

/// `A ⊥ B | C` over node indices. Blocks are sorted and deduplicated.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct CIStatement {
    a: Vec<usize>,
    b: Vec<usize>,
    c: Vec<usize>,
}

impl CIStatement {
    pub fn new(net: &NetworkSpec, a: &[usize], b: &[usize], c: &[usize]) -> Result<Self> {
        let norm = |s: &[usize]| {
            let mut v = s.to_vec();
            v.sort_unstable();
            v.dedup();
            v
        };
        let (a, b, c) = (norm(a), norm(b), norm(c));
        if a.is_empty() || b.is_empty() {
            return Err(Error::Statement("both A and B must be nonempty".into()));
        }
        if let Some(bad) = a.iter().chain(&b).chain(&c).find(|&&v| v >= net.len()) {
            return Err(Error::Statement(format!("node index {bad} out of range")));
        }
        let overlap = |x: &[usize], y: &[usize]| x.iter().any(|v| y.contains(v));
        if overlap(&a, &b) || overlap(&a, &c) || overlap(&b, &c) {
            return Err(Error::Statement("blocks A, B, C must be pairwise disjoint".into()));
        }
        Ok(Self { a, b, c })
    }

    /// Resolves node names against `net`.
    pub fn from_names(net: &NetworkSpec, a: &[&str], b: &[&str], c: &[&str]) -> Result<Self> {
        let resolve = |names: &[&str]| {
            names
                .iter()
                .map(|n| {
                    net.index_of(n)
                        .ok_or_else(|| Error::Statement(format!("unknown node {n:?}")))
                })
                .collect::<Result<Vec<_>>>()
        };
        Self::new(net, &resolve(a)?, &resolve(b)?, &resolve(c)?)
    }

    pub fn a(&self) -> &[usize] {
        &self.a
    }

    pub fn b(&self) -> &[usize] {
        &self.b
    }

    pub fn c(&self) -> &[usize] {
        &self.c
    }

    pub fn display(&self, net: &NetworkSpec) -> String {
        let names = |s: &[usize]| {
            s.iter()
                .map(|&i| net.node(i).name.as_str())
                .collect::<Vec<_>>()
                .join(",")
        };
        format!(
            "{{{}}} _||_ {{{}}} | {{{}}}",
            names(&self.a),
            names(&self.b),
            names(&self.c)
        )
    }
}

/// Active-trail reachability ("Bayes ball"). `true` iff every trail between
/// A and B is blocked by C.
pub fn d_separated(net: &NetworkSpec, stmt: &CIStatement) -> bool {
    let n = net.len();
    let mut given = vec![false; n];
    for &v in stmt.c() {
        given[v] = true;
    }
    let anc_given = net.ancestors_of(stmt.c());
    let mut target = vec![false; n];
    for &v in stmt.b() {
        target[v] = true;
    }

    // visited[v][0]: reached travelling up (from a child); [1]: down (from a parent)
    let mut visited = vec![[false; 2]; n];
    let mut queue: VecDeque<(usize, bool)> = stmt.a().iter().map(|&v| (v, true)).collect();
    while let Some((v, up)) = queue.pop_front() {
        let slot = if up { 0 } else { 1 };
        if visited[v][slot] {
            continue;
        }
        visited[v][slot] = true;
        if !given[v] && target[v] {
            return false;
        }
        if up {
            if !given[v] {
                queue.extend(net.parents(v).iter().map(|&p| (p, true)));
                queue.extend(net.children(v).iter().map(|&c| (c, false)));
            }
        } else {
            if !given[v] {
                queue.extend(net.children(v).iter().map(|&c| (c, false)));
            }
            if anc_given[v] {
                queue.extend(net.parents(v).iter().map(|&p| (p, true)));
            }
        }
    }
    true
}

/// `X_i ⊥ nd(X_i) \ pa(X_i) | pa(X_i)` for every node whose second block is
/// nonempty, in node order.
pub fn local_markov_statements(net: &NetworkSpec) -> Vec<CIStatement> {
    (0..net.len())
        .filter_map(|i| {
            let desc = net.descendants(i);
            let parents = net.parents(i);
            let rest: Vec<usize> = (0..net.len())
                .filter(|&v| v != i && !desc[v] && !parents.contains(&v))
                .collect();
            if rest.is_empty() {
                None
            } else {
                Some(CIStatement {
                    a: vec![i],
                    b: rest,
                    c: parents.to_vec(),
                })
            }
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::net_model::network_from_parts;

    fn chain() -> NetworkSpec {
        network_from_parts(&[
            ("X1", 2, &["X3"], false),
            ("X2", 2, &["X1"], false),
            ("X3", 2, &[], false),
        ])
        .unwrap()
    }

    #[test]
    fn chain_examples() {
        let net = chain();
        let s = CIStatement::from_names(&net, &["X2"], &["X3"], &["X1"]).unwrap();
        assert!(d_separated(&net, &s));
        let s = CIStatement::from_names(&net, &["X2"], &["X3"], &[]).unwrap();
        assert!(!d_separated(&net, &s));
    }

    #[test]
    fn collider_opens_when_conditioned() {
        let net = network_from_parts(&[
            ("X1", 2, &[], false),
            ("X2", 2, &[], false),
            ("X3", 2, &["X1", "X2"], false),
        ])
        .unwrap();
        let open = CIStatement::from_names(&net, &["X1"], &["X2"], &["X3"]).unwrap();
        assert!(!d_separated(&net, &open));
        let closed = CIStatement::from_names(&net, &["X1"], &["X2"], &[]).unwrap();
        assert!(d_separated(&net, &closed));
    }

    #[test]
    fn collider_descendant_also_opens() {
        let net = network_from_parts(&[
            ("A", 2, &[], false),
            ("B", 2, &[], false),
            ("C", 2, &["A", "B"], false),
            ("D", 2, &["C"], false),
        ])
        .unwrap();
        let s = CIStatement::from_names(&net, &["A"], &["B"], &["D"]).unwrap();
        assert!(!d_separated(&net, &s));
    }

    #[test]
    fn statement_validation() {
        let net = chain();
        assert!(CIStatement::new(&net, &[0], &[0], &[]).is_err());
        assert!(CIStatement::new(&net, &[0], &[1], &[0]).is_err());
        assert!(CIStatement::new(&net, &[], &[1], &[]).is_err());
        assert!(CIStatement::new(&net, &[0], &[7], &[]).is_err());
    }

    #[test]
    fn local_markov_examples() {
        let net = chain();
        let stmts = local_markov_statements(&net);
        assert_eq!(stmts.len(), 1);
        assert_eq!(
            (stmts[0].a(), stmts[0].b(), stmts[0].c()),
            (&[1][..], &[2][..], &[0][..])
        );

        let full = network_from_parts(&[
            ("X1", 2, &[], false),
            ("X2", 2, &["X1"], false),
            ("X3", 2, &["X1", "X2"], false),
        ])
        .unwrap();
        assert!(local_markov_statements(&full).is_empty());

        let nb = network_from_parts(&[
            ("H", 2, &[], true),
            ("X1", 2, &["H"], false),
            ("X2", 2, &["H"], false),
            ("X3", 2, &["H"], false),
        ])
        .unwrap();
        let stmts = local_markov_statements(&nb);
        assert_eq!(stmts.len(), 3);
        assert_eq!(stmts[0].b(), &[2, 3]);
        assert_eq!(stmts[1].b(), &[1, 3]);
        assert_eq!(stmts[2].b(), &[1, 2]);
        assert!(stmts.iter().all(|s| s.c() == [0]));
        assert!(stmts.iter().all(|s| d_separated(&nb, s)));
    }
}
