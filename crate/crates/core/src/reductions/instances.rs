use std::fmt;

use crate::error::{Error, Result};

/// Literal over a 1-based variable index.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Literal {
    pub var: usize,
    pub positive: bool,
}

impl Literal {
    pub fn pos(var: usize) -> Self {
        Literal { var, positive: true }
    }

    pub fn neg(var: usize) -> Self {
        Literal { var, positive: false }
    }

    fn from_dimacs(x: i64) -> Self {
        Literal {
            var: x.unsigned_abs() as usize,
            positive: x > 0,
        }
    }

    pub fn eval(self, assignment: &[bool]) -> bool {
        assignment[self.var - 1] == self.positive
    }
}

impl fmt::Display for Literal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.positive {
            write!(f, "{}", self.var)
        } else {
            write!(f, "-{}", self.var)
        }
    }
}

pub type Clause3 = [Literal; 3];

/// Formula in 3-CNF.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct CnfFormula {
    vars: usize,
    clauses: Vec<Clause3>,
}

impl CnfFormula {
    pub fn new(vars: usize, clauses: Vec<Clause3>) -> Result<Self> {
        for (k, c) in clauses.iter().enumerate() {
            if let Some(l) = c.iter().find(|l| l.var == 0 || l.var > vars) {
                return Err(Error::Unsupported(format!(
                    "clause {} uses variable {} outside 1..={vars}",
                    k + 1,
                    l.var
                )));
            }
        }
        Ok(CnfFormula { vars, clauses })
    }

    pub fn vars(&self) -> usize {
        self.vars
    }

    pub fn clauses(&self) -> &[Clause3] {
        &self.clauses
    }

    pub fn is_monotone(&self) -> bool {
        self.clauses.iter().flatten().all(|l| l.positive)
    }

    pub fn satisfied_by(&self, assignment: &[bool]) -> bool {
        self.clauses.iter().all(|c| c.iter().any(|l| l.eval(assignment)))
    }

    /// Parses DIMACS CNF. Every clause must have exactly three literals.
    pub fn parse_dimacs(text: &str) -> Result<Self> {
        let mut header: Option<(usize, usize)> = None;
        let mut clauses = Vec::new();
        let mut pending: Vec<i64> = Vec::new();
        for (n, raw) in text.lines().enumerate() {
            let line = raw.trim();
            let syntax = |column: usize, message: String| Error::Syntax {
                line: n + 1,
                column,
                message,
            };
            if line.is_empty() || line.starts_with('c') || line.starts_with('%') {
                continue;
            }
            if let Some(rest) = line.strip_prefix('p') {
                let parts: Vec<&str> = rest.split_whitespace().collect();
                match parts.as_slice() {
                    ["cnf", v, c] => {
                        let v = v.parse().map_err(|_| syntax(1, format!("bad variable count `{v}`")))?;
                        let c = c.parse().map_err(|_| syntax(1, format!("bad clause count `{c}`")))?;
                        header = Some((v, c));
                    }
                    _ => return Err(syntax(1, "expected `p cnf <vars> <clauses>`".into())),
                }
                continue;
            }
            if header.is_none() {
                return Err(syntax(1, "clause before the `p cnf` header".into()));
            }
            for tok in line.split_whitespace() {
                let x: i64 = tok.parse().map_err(|_| syntax(1, format!("bad literal `{tok}`")))?;
                if x != 0 {
                    pending.push(x);
                    continue;
                }
                if pending.len() != 3 {
                    return Err(syntax(1, format!("clause has {} literals, expected 3", pending.len())));
                }
                clauses.push([
                    Literal::from_dimacs(pending[0]),
                    Literal::from_dimacs(pending[1]),
                    Literal::from_dimacs(pending[2]),
                ]);
                pending.clear();
            }
        }
        if !pending.is_empty() {
            return Err(Error::Syntax {
                line: text.lines().count(),
                column: 1,
                message: "last clause is not terminated by 0".into(),
            });
        }
        let (vars, count) = header.ok_or_else(|| Error::Syntax {
            line: 1,
            column: 1,
            message: "missing `p cnf` header".into(),
        })?;
        if count != clauses.len() {
            return Err(Error::Syntax {
                line: 1,
                column: 1,
                message: format!("header announces {count} clauses, found {}", clauses.len()),
            });
        }
        CnfFormula::new(vars, clauses)
    }

    pub fn to_dimacs(&self) -> String {
        let mut out = format!("p cnf {} {}\n", self.vars, self.clauses.len());
        for c in &self.clauses {
            out.push_str(&format!("{} {} {} 0\n", c[0], c[1], c[2]));
        }
        out
    }
}

/// NAE-3SAT instance: a 3-CNF read with not-all-equal semantics.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct NaeInstance {
    pub formula: CnfFormula,
}

impl NaeInstance {
    pub fn new(formula: CnfFormula) -> Self {
        NaeInstance { formula }
    }

    pub fn parse_dimacs(text: &str) -> Result<Self> {
        CnfFormula::parse_dimacs(text).map(NaeInstance::new)
    }

    /// Every clause has a true and a false literal.
    pub fn satisfied_by(&self, assignment: &[bool]) -> bool {
        self.formula.clauses().iter().all(|c| {
            let t = c.iter().filter(|l| l.eval(assignment)).count();
            t > 0 && t < 3
        })
    }
}

/// Undirected graph on vertices `1..=n`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Graph {
    vertices: usize,
    edges: Vec<(usize, usize)>,
}

impl Graph {
    pub fn new(vertices: usize, edges: Vec<(usize, usize)>) -> Result<Self> {
        if vertices < 3 {
            return Err(Error::Unsupported(format!("a graph needs at least 3 vertices, got {vertices}")));
        }
        for &(u, v) in &edges {
            if u == v {
                return Err(Error::Unsupported(format!("self-loop at vertex {u}")));
            }
            if u == 0 || v == 0 || u > vertices || v > vertices {
                return Err(Error::Unsupported(format!("edge {u}-{v} outside 1..={vertices}")));
            }
        }
        Ok(Graph { vertices, edges })
    }

    pub fn vertices(&self) -> usize {
        self.vertices
    }

    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    /// `colors[i]` is the color of vertex `i + 1`.
    pub fn is_proper(&self, colors: &[usize]) -> bool {
        self.edges.iter().all(|&(u, v)| colors[u - 1] != colors[v - 1])
    }

    /// Reads `e u v` lines, 1-indexed. An optional `p edge n m` line fixes
    /// the vertex count; otherwise it is the largest index (at least 3).
    pub fn parse_edges(text: &str) -> Result<Self> {
        let mut n = None;
        let mut edges = Vec::new();
        let mut largest = 0;
        for (k, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            let syntax = |message: String| Error::Syntax {
                line: k + 1,
                column: 1,
                message,
            };
            if line.is_empty() || line.starts_with('c') {
                continue;
            }
            let parts: Vec<&str> = line.split_whitespace().collect();
            match parts.as_slice() {
                ["p", _, count, ..] => {
                    n = Some(count.parse().map_err(|_| syntax(format!("bad vertex count `{count}`")))?);
                }
                ["e", u, v] => {
                    let u: usize = u.parse().map_err(|_| syntax(format!("bad vertex `{u}`")))?;
                    let v: usize = v.parse().map_err(|_| syntax(format!("bad vertex `{v}`")))?;
                    largest = largest.max(u).max(v);
                    edges.push((u, v));
                }
                _ => return Err(syntax(format!("expected `e <u> <v>`, found `{line}`"))),
            }
        }
        Graph::new(n.unwrap_or(largest.max(3)), edges)
    }

    pub fn to_edges(&self) -> String {
        let mut out = format!("p edge {} {}\n", self.vertices, self.edges.len());
        for (u, v) in &self.edges {
            out.push_str(&format!("e {u} {v}\n"));
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn dimacs_round_trip() {
        let f = CnfFormula::parse_dimacs("c example\np cnf 3 2\n1 -2 3 0\n-1 -2 3 0\n").unwrap();
        assert_eq!(f.clauses()[0], [Literal::pos(1), Literal::neg(2), Literal::pos(3)]);
        assert_eq!(CnfFormula::parse_dimacs(&f.to_dimacs()).unwrap(), f);
    }

    #[test]
    fn dimacs_errors() {
        assert!(CnfFormula::parse_dimacs("p cnf 3 1\n1 2 0\n").is_err());
        assert!(CnfFormula::parse_dimacs("p cnf 2 1\n1 2 3 0\n").is_err());
        assert!(CnfFormula::parse_dimacs("1 2 3 0\n").is_err());
        assert!(CnfFormula::parse_dimacs("p cnf 3 1\n1 2 3\n").is_err());
    }

    #[test]
    fn edge_lists() {
        let g = Graph::parse_edges("e 1 3\ne 1 2\ne 2 3\ne 3 4\n").unwrap();
        assert_eq!(g.vertices(), 4);
        assert_eq!(Graph::parse_edges(&g.to_edges()).unwrap(), g);
        assert!(Graph::parse_edges("e 1 1\n").is_err());
        assert_eq!(Graph::parse_edges("").unwrap().vertices(), 3);
    }

    #[test]
    fn nae_semantics() {
        let f = CnfFormula::new(3, vec![[Literal::pos(1), Literal::pos(2), Literal::pos(3)]]).unwrap();
        let nae = NaeInstance::new(f);
        assert!(!nae.satisfied_by(&[true, true, true]));
        assert!(nae.satisfied_by(&[true, false, true]));
        assert!(!nae.satisfied_by(&[false, false, false]));
    }
}
