use std::collections::VecDeque;
use std::fmt;

use crate::matrices::BinaryMatrix;

/// Girth of a bipartite graph: always even, or infinite for a forest.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Girth {
    Finite(usize),
    Infinite,
}

impl Girth {
    pub fn finite(self) -> Option<usize> {
        match self {
            Girth::Finite(g) => Some(g),
            Girth::Infinite => None,
        }
    }
}

impl fmt::Display for Girth {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Girth::Finite(g) => write!(f, "{g}"),
            Girth::Infinite => write!(f, "inf"),
        }
    }
}

/// Exact girth of the bipartite graph with columns as left nodes and rows as
/// right nodes.
///
/// Runs a breadth-first search from every node on the smaller side (each
/// cycle visits both sides) and keeps the shortest cycle closed by a non-tree
/// edge. A search stops once no shorter cycle can appear.
pub fn girth(m: &BinaryMatrix) -> Girth {
    let n = m.cols();
    let rows = m.row_supports();
    // Nodes 0..n are columns, n..n+rows are rows.
    let total = n + m.rows();
    let neighbors = |v: usize| -> &[usize] {
        if v < n {
            m.column(v)
        } else {
            &rows[v - n]
        }
    };
    let offset = |v: usize, w: usize| if v < n { w + n } else { w };

    let sources: Box<dyn Iterator<Item = usize>> = if m.rows() < n {
        Box::new(n..total)
    } else {
        Box::new(0..n)
    };

    let mut best = usize::MAX;
    let mut dist = vec![usize::MAX; total];
    let mut parent = vec![usize::MAX; total];
    let mut touched = Vec::new();
    let mut queue = VecDeque::new();
    for s in sources {
        dist[s] = 0;
        touched.push(s);
        queue.push_back(s);
        'bfs: while let Some(u) = queue.pop_front() {
            // In a bipartite graph the shortest cycle closed below u has
            // length at least 2 * dist(u) + 2.
            if 2 * dist[u] + 2 >= best {
                break;
            }
            for &raw in neighbors(u) {
                let w = offset(u, raw);
                if w == parent[u] {
                    continue;
                }
                if dist[w] == usize::MAX {
                    dist[w] = dist[u] + 1;
                    parent[w] = u;
                    touched.push(w);
                    queue.push_back(w);
                } else {
                    best = best.min(dist[u] + dist[w] + 1);
                    if 2 * dist[u] + 2 >= best {
                        break 'bfs;
                    }
                }
            }
        }
        for &v in &touched {
            dist[v] = usize::MAX;
            parent[v] = usize::MAX;
        }
        touched.clear();
        queue.clear();
        if best == 4 {
            break;
        }
    }
    if best == usize::MAX {
        Girth::Infinite
    } else {
        Girth::Finite(best)
    }
}
