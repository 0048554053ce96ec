//! Recognition of the rigid filtered-complex shapes: staircases, boxes, and
//! almost staircases.

use serde::Serialize;

/// A finite based complex with weighted differential edges, as produced
/// either directly from a spin-c class or from a change of basis.
#[derive(Debug, Clone, Default)]
pub struct Block {
    pub size: usize,
    /// `(from, to, n_w, n_z)` with mod-2 multiplicity one.
    pub edges: Vec<(usize, usize, u32, u32)>,
    /// Human-readable vector labels, parallel to indices.
    pub labels: Vec<String>,
}

impl Block {
    pub fn new(size: usize, edges: Vec<(usize, usize, u32, u32)>, labels: Vec<String>) -> Block {
        Block { size, edges, labels }
    }

    fn out_edges(&self, v: usize) -> Vec<&(usize, usize, u32, u32)> {
        self.edges.iter().filter(|e| e.0 == v).collect()
    }

    fn in_edges(&self, v: usize) -> Vec<&(usize, usize, u32, u32)> {
        self.edges.iter().filter(|e| e.1 == v).collect()
    }

    fn neighbors(&self, v: usize) -> Vec<usize> {
        self.edges
            .iter()
            .filter_map(|&(a, b, _, _)| {
                if a == v {
                    Some(b)
                } else if b == v {
                    Some(a)
                } else {
                    None
                }
            })
            .collect()
    }

    /// The reverse-differential block.
    pub fn dual(&self) -> Block {
        Block {
            size: self.size,
            edges: self.edges.iter().map(|&(a, b, w, z)| (b, a, w, z)).collect(),
            labels: self.labels.clone(),
        }
    }
}

/// Sign of a recognized shape, relative to this crate's bigon orientation
/// convention.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum ShapeSign {
    Positive,
    Negative,
}

/// A recognized staircase: `2N+1` generators in an alternating chain.
#[derive(Debug, Clone, Serialize)]
pub struct StaircaseData {
    /// Path order of the block indices, spokes at even positions.
    pub order: Vec<usize>,
    /// N: the number of hub generators.
    pub steps: usize,
    pub sign: ShapeSign,
}

impl StaircaseData {
    pub fn generator_count(&self) -> usize {
        self.order.len()
    }
}

/// A recognized box with length one.
#[derive(Debug, Clone, Serialize)]
pub struct BoxData {
    /// Block indices of the corners (a, b, c, d) with `d` the double-source
    /// in the block's own differential direction.
    pub a: usize,
    pub b: usize,
    pub c: usize,
    pub d: usize,
    pub sign: ShapeSign,
}

/// Whether the component graph is exactly an alternating chain.
pub fn recognize_staircase(block: &Block) -> Option<StaircaseData> {
    let n = block.size;
    if n % 2 == 0 {
        return None;
    }
    if n == 1 {
        return block.edges.is_empty().then(|| StaircaseData {
            order: vec![0],
            steps: 0,
            sign: ShapeSign::Positive,
        });
    }
    if block.edges.len() != n - 1 {
        return None;
    }
    // Simple path covering all vertices.
    let mut degree = vec![0usize; n];
    for &(a, b, _, _) in &block.edges {
        if a == b {
            return None;
        }
        degree[a] += 1;
        degree[b] += 1;
    }
    let ends: Vec<usize> = (0..n).filter(|&v| degree[v] == 1).collect();
    if ends.len() != 2 || degree.iter().any(|&d| d > 2 || d == 0) {
        return None;
    }
    let mut order = vec![ends[0]];
    let mut prev = usize::MAX;
    while order.len() < n {
        let cur = *order.last().unwrap();
        let next = block.neighbors(cur).into_iter().find(|&v| v != prev)?;
        prev = cur;
        order.push(next);
    }
    if order.len() != n {
        return None;
    }
    // Hubs at odd path positions; all sources (positive) or all sinks.
    let mut sign: Option<ShapeSign> = None;
    for (pos, &v) in order.iter().enumerate() {
        let outs = block.out_edges(v).len();
        let ins = block.in_edges(v).len();
        if pos % 2 == 1 {
            let here = match (outs, ins) {
                (2, 0) => ShapeSign::Positive,
                (0, 2) => ShapeSign::Negative,
                _ => return None,
            };
            if *sign.get_or_insert(here) != here {
                return None;
            }
            // One pure-w and one pure-z edge at each hub.
            let mut kinds = [0usize; 2];
            for e in block.out_edges(v).into_iter().chain(block.in_edges(v)) {
                match pure_kind(e.2, e.3) {
                    Some(PureKind::W) => kinds[0] += 1,
                    Some(PureKind::Z) => kinds[1] += 1,
                    None => return None,
                }
            }
            if kinds != [1, 1] {
                return None;
            }
        } else if outs + ins > 2 {
            return None;
        }
    }
    Some(StaircaseData { order, steps: (n - 1) / 2, sign: sign.unwrap() })
}

enum PureKind {
    W,
    Z,
}

fn pure_kind(n_w: u32, n_z: u32) -> Option<PureKind> {
    match (n_w, n_z) {
        (w, 0) if w >= 1 => Some(PureKind::W),
        (0, z) if z >= 1 => Some(PureKind::Z),
        _ => None,
    }
}

/// Whether the block is exactly a box with length one.
pub fn recognize_box(block: &Block) -> Option<BoxData> {
    if block.size != 4 || block.edges.len() != 4 {
        return None;
    }
    for (candidate, sign) in
        [(block.clone(), ShapeSign::Positive), (block.dual(), ShapeSign::Negative)]
    {
        'outer: for d in 0..4 {
            let outs = candidate.out_edges(d);
            if outs.len() != 2 || !candidate.in_edges(d).is_empty() {
                continue;
            }
            let (mut b, mut c) = (None, None);
            for e in &outs {
                match (e.2, e.3) {
                    (1, 0) => b = Some(e.1),
                    (0, 1) => c = Some(e.1),
                    _ => continue 'outer,
                }
            }
            let (Some(b), Some(c)) = (b, c) else { continue };
            if b == c {
                continue;
            }
            let a = (0..4).find(|&v| v != d && v != b && v != c)?;
            let b_out = candidate.out_edges(b);
            let c_out = candidate.out_edges(c);
            if b_out.len() == 1
                && c_out.len() == 1
                && b_out[0].1 == a
                && (b_out[0].2, b_out[0].3) == (0, 1)
                && c_out[0].1 == a
                && (c_out[0].2, c_out[0].3) == (1, 0)
                && candidate.out_edges(a).is_empty()
            {
                return Some(BoxData { a, b, c, d, sign });
            }
        }
    }
    None
}

/// Which almost-staircase pattern a block matches.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum AlmostStaircaseKind {
    A,
    B,
}

/// Matches the two almost-staircase patterns, in either global orientation.
///
/// Diagnostic only: no complex produced from a (1,1) diagram may match.
pub fn recognize_almost_staircase(block: &Block) -> Option<AlmostStaircaseKind> {
    for candidate in [block.clone(), block.dual()] {
        if match_almost_a(&candidate) {
            return Some(AlmostStaircaseKind::A);
        }
        if match_almost_b(&candidate) {
            return Some(AlmostStaircaseKind::B);
        }
    }
    None
}

/// Pattern (a): generators x_1..x_2k, y_1..y_{2k+1}, y'_{k+1}, z with
/// dx_k and dx_{k+1} hitting three targets each and dy_{k+1} = dy'_{k+1} = z.
fn match_almost_a(block: &Block) -> bool {
    let n = block.size;
    if n < 7 || (n - 3) % 4 != 0 {
        return false;
    }
    // z: terminal with exactly two in-edges of pure unit weight.
    for z in 0..n {
        if !block.out_edges(z).is_empty() {
            continue;
        }
        let ins = block.in_edges(z);
        if ins.len() != 2 {
            continue;
        }
        let (u1, u2) = (ins[0], ins[1]);
        let pair_ok = matches!(
            ((u1.2, u1.3), (u2.2, u2.3)),
            ((0, 1), (1, 0)) | ((1, 0), (0, 1))
        );
        if !pair_ok {
            continue;
        }
        // u1, u2 are y_{k+1}, y'_{k+1}; both must receive from the same two
        // generators x_k, x_{k+1}, each of out-degree 3.
        let srcs1: std::collections::BTreeSet<usize> =
            block.in_edges(u1.0).iter().map(|e| e.0).collect();
        let srcs2: std::collections::BTreeSet<usize> =
            block.in_edges(u2.0).iter().map(|e| e.0).collect();
        if srcs1 != srcs2 || srcs1.len() != 2 {
            continue;
        }
        let xs: Vec<usize> = srcs1.into_iter().collect();
        if xs.iter().any(|&x| block.out_edges(x).len() != 3) {
            continue;
        }
        // Each special x has one remaining chain edge; the chains plus the
        // special cluster must consume every generator in staircase fashion.
        let cluster = [z, u1.0, u2.0, xs[0], xs[1]];
        if chains_cover(block, &cluster, &[xs[0], xs[1]]) {
            return true;
        }
    }
    false
}

/// Pattern (b): dz = x_{k+1} + x'_{k+1}, dx_{k+1} = dx'_{k+1} = y_{k+1} + y_{k+2}.
fn match_almost_b(block: &Block) -> bool {
    let n = block.size;
    if n < 9 || (n - 5) % 4 != 0 {
        return false;
    }
    for z in 0..n {
        let outs = block.out_edges(z);
        if outs.len() != 2 || !block.in_edges(z).is_empty() {
            continue;
        }
        let (x1, x2) = (outs[0].1, outs[1].1);
        let pair_ok = matches!(
            ((outs[0].2, outs[0].3), (outs[1].2, outs[1].3)),
            ((0, 1), (1, 0)) | ((1, 0), (0, 1))
        );
        if !pair_ok || x1 == x2 {
            continue;
        }
        let t1: std::collections::BTreeSet<usize> =
            block.out_edges(x1).iter().map(|e| e.1).collect();
        let t2: std::collections::BTreeSet<usize> =
            block.out_edges(x2).iter().map(|e| e.1).collect();
        if t1 != t2 || t1.len() != 2 {
            continue;
        }
        let ys: Vec<usize> = t1.into_iter().collect();
        let cluster = [z, x1, x2, ys[0], ys[1]];
        if chains_cover(block, &cluster, &[ys[0], ys[1]]) {
            return true;
        }
    }
    false
}

/// Checks that, outside the special cluster, the block is a disjoint union of
/// alternating chains hanging off the two attachment vertices and covering
/// everything.
fn chains_cover(block: &Block, cluster: &[usize], attachments: &[usize]) -> bool {
    let n = block.size;
    let mut visited = vec![false; n];
    for &v in cluster {
        visited[v] = true;
    }
    for &start in attachments {
        // Follow the chain away from the cluster.
        let mut prev = start;
        let mut cur = match block
            .neighbors(start)
            .into_iter()
            .find(|&v| !visited[v])
        {
            Some(v) => v,
            None => continue,
        };
        loop {
            if visited[cur] {
                return false;
            }
            visited[cur] = true;
            let next: Vec<usize> =
                block.neighbors(cur).into_iter().filter(|&v| v != prev && !visited[v]).collect();
            match next.len() {
                0 => break,
                1 => {
                    prev = cur;
                    cur = next[0];
                }
                _ => return false,
            }
        }
    }
    visited.iter().all(|&v| v)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn block(size: usize, edges: &[(usize, usize, u32, u32)]) -> Block {
        Block::new(size, edges.to_vec(), (0..size).map(|i| format!("g{i}")).collect())
    }

    #[test]
    fn staircase_recognition() {
        // single generator
        assert!(recognize_staircase(&block(1, &[])).is_some());
        // positive N=1: x at index 1, ys at 0 and 2
        let s = recognize_staircase(&block(3, &[(1, 0, 1, 0), (1, 2, 0, 1)])).unwrap();
        assert_eq!(s.steps, 1);
        assert_eq!(s.sign, ShapeSign::Positive);
        // negative (dual)
        let s = recognize_staircase(&block(3, &[(0, 1, 1, 0), (2, 1, 0, 1)])).unwrap();
        assert_eq!(s.sign, ShapeSign::Negative);
        // mixed hub types rejected
        assert!(recognize_staircase(&block(3, &[(1, 0, 1, 0), (1, 2, 2, 0)])).is_none());
        // box is not a staircase
        assert!(recognize_staircase(&block(
            4,
            &[(3, 1, 1, 0), (3, 2, 0, 1), (1, 0, 0, 1), (2, 0, 1, 0)]
        ))
        .is_none());
    }

    #[test]
    fn box_recognition() {
        let b = block(4, &[(3, 1, 1, 0), (3, 2, 0, 1), (1, 0, 0, 1), (2, 0, 1, 0)]);
        let found = recognize_box(&b).unwrap();
        assert_eq!(found.d, 3);
        assert_eq!(found.a, 0);
        assert_eq!(found.sign, ShapeSign::Positive);
        // dual box
        let found = recognize_box(&b.dual()).unwrap();
        assert_eq!(found.sign, ShapeSign::Negative);
        // length-2 edges rejected
        let long = block(4, &[(3, 1, 2, 0), (3, 2, 0, 1), (1, 0, 0, 1), (2, 0, 1, 0)]);
        assert!(recognize_box(&long).is_none());
        // staircase of 3 is not a box
        assert!(recognize_box(&block(3, &[(1, 0, 1, 0), (1, 2, 0, 1)])).is_none());
    }
}
