#![allow(clippy::needless_range_loop)]

use std::collections::{BTreeMap, BTreeSet};

/// Dense symmetric adjacency matrix.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Dense {
    pub adj: Vec<Vec<bool>>,
}

impl Dense {
    pub fn new(n: usize, edges: &[(usize, usize)]) -> Self {
        let mut adj = vec![vec![false; n]; n];
        for &(a, b) in edges {
            if a != b {
                adj[a][b] = true;
                adj[b][a] = true;
            }
        }
        Self { adj }
    }

    pub fn n(&self) -> usize {
        self.adj.len()
    }

    pub fn m(&self) -> usize {
        let mut m = 0;
        for i in 0..self.n() {
            for j in i + 1..self.n() {
                if self.adj[i][j] {
                    m += 1;
                }
            }
        }
        m
    }

    pub fn degree(&self, x: usize) -> usize {
        self.adj[x].iter().filter(|&&b| b).count()
    }

    pub fn common(&self, x: usize, y: usize) -> Vec<usize> {
        (0..self.n()).filter(|&z| self.adj[x][z] && self.adj[y][z]).collect()
    }
}

/// All non-adjacent pairs `i < j` with at least one common neighbour.
pub fn candidate_pairs(g: &Dense) -> BTreeSet<(usize, usize)> {
    let mut out = BTreeSet::new();
    for i in 0..g.n() {
        for j in i + 1..g.n() {
            if !g.adj[i][j] && !g.common(i, j).is_empty() {
                out.insert((i, j));
            }
        }
    }
    out
}

/// Connection matrix by scanning every node pair.
pub fn connection_matrix(g: &Dense, labels: &[usize]) -> Vec<Vec<u64>> {
    let k = labels.iter().max().map_or(0, |&m| m + 1);
    let mut cm = vec![vec![0u64; k]; k];
    for i in 0..g.n() {
        for j in i + 1..g.n() {
            if g.adj[i][j] {
                let (a, b) = (labels[i], labels[j]);
                if a == b {
                    cm[a][a] += 1;
                } else {
                    cm[a][b] += 1;
                    cm[b][a] += 1;
                }
            }
        }
    }
    cm
}

/// Boundary score with base-2 entropies (the base cancels in the ratio).
pub fn boundary(g: &Dense, labels: &[usize], x: usize) -> f64 {
    let d = g.degree(x);
    if d <= 1 {
        return 0.0;
    }
    let mut counts: BTreeMap<usize, usize> = BTreeMap::new();
    for z in 0..g.n() {
        if g.adj[x][z] {
            *counts.entry(labels[z]).or_default() += 1;
        }
    }
    let h: f64 = counts
        .values()
        .map(|&c| {
            let p = c as f64 / d as f64;
            -p * p.log2()
        })
        .sum();
    h / (d as f64).log2()
}

pub fn harmony(g: &Dense, labels: &[usize], x: usize, y: usize) -> f64 {
    let common = g.common(x, y);
    let total: f64 = common.iter().map(|&z| 1.0 - boundary(g, labels, z)).sum();
    total / common.len() as f64
}

pub fn csa(g: &Dense, labels: &[usize], x: usize, y: usize) -> f64 {
    let cm = connection_matrix(g, labels);
    let (a, b) = (labels[x], labels[y]);
    if a != b {
        cm[a][b] as f64 / cm[a][a].min(cm[b][b]).max(1) as f64
    } else {
        let size = |c: usize| labels.iter().filter(|&&l| l == c).count();
        let largest = (0..cm.len()).map(size).max().unwrap();
        (size(a) as f64).sqrt() / largest as f64
    }
}

/// Index values by name: "ja", "pa", "cn", "cn1", "ra", "ra1", "hap".
pub fn index(name: &str, g: &Dense, labels: &[usize], x: usize, y: usize) -> f64 {
    let common = g.common(x, y);
    let same: Vec<usize> = common
        .iter()
        .copied()
        .filter(|&z| labels[x] == labels[y] && labels[z] == labels[x])
        .collect();
    let ra = |zs: &[usize]| zs.iter().map(|&z| 1.0 / g.degree(z) as f64).sum::<f64>();
    match name {
        "cn" => common.len() as f64,
        "ja" => {
            let union = (0..g.n()).filter(|&z| g.adj[x][z] || g.adj[y][z]).count();
            common.len() as f64 / union as f64
        }
        "pa" => (g.degree(x) * g.degree(y)) as f64,
        "ra" => ra(&common),
        "cn1" => (common.len() + same.len()) as f64,
        "ra1" => ra(&common) + ra(&same),
        "hap" => harmony(g, labels, x, y) * csa(g, labels, x, y),
        other => panic!("no oracle for index {other}"),
    }
}

/// Modularity as `1/2m * sum_ij (A_ij - k_i k_j / 2m) [c_i == c_j]`.
pub fn modularity(g: &Dense, labels: &[usize]) -> f64 {
    let two_m = 2.0 * g.m() as f64;
    let k: Vec<f64> = (0..g.n()).map(|i| g.degree(i) as f64).collect();
    let mut q = 0.0;
    for i in 0..g.n() {
        for j in 0..g.n() {
            if labels[i] == labels[j] {
                let a = if g.adj[i][j] { 1.0 } else { 0.0 };
                q += a - k[i] * k[j] / two_m;
            }
        }
    }
    q / two_m
}

/// Best modularity over all assignments of nodes to at most `groups` labels.
pub fn best_modularity(g: &Dense, groups: usize) -> (f64, Vec<usize>) {
    let n = g.n();
    let mut labels = vec![0usize; n];
    let mut best = (f64::NEG_INFINITY, labels.clone());
    loop {
        let q = modularity(g, &labels);
        if q > best.0 {
            best = (q, labels.clone());
        }
        // odometer increment
        let mut i = 0;
        loop {
            if i == n {
                return best;
            }
            labels[i] += 1;
            if labels[i] < groups {
                break;
            }
            labels[i] = 0;
            i += 1;
        }
    }
}

fn entropy2(counts: impl Iterator<Item = usize>, n: usize) -> f64 {
    counts
        .filter(|&c| c > 0)
        .map(|c| {
            let p = c as f64 / n as f64;
            -p * p.log2()
        })
        .sum()
}

/// NMI through `MI = H(a) + H(b) - H(a, b)`, with the identical -> 1,
/// otherwise-degenerate -> 0 convention.
pub fn nmi(a: &[usize], b: &[usize]) -> f64 {
    let n = a.len();
    let count = |labels: &[usize]| {
        let mut m: BTreeMap<usize, usize> = BTreeMap::new();
        for &l in labels {
            *m.entry(l).or_default() += 1;
        }
        m
    };
    let mut joint: BTreeMap<(usize, usize), usize> = BTreeMap::new();
    for i in 0..n {
        *joint.entry((a[i], b[i])).or_default() += 1;
    }
    let ha = entropy2(count(a).into_values(), n);
    let hb = entropy2(count(b).into_values(), n);
    let hab = entropy2(joint.into_values(), n);
    if same_grouping(a, b) {
        return 1.0;
    }
    if ha == 0.0 || hb == 0.0 {
        return 0.0;
    }
    (ha + hb - hab) / (ha * hb).sqrt()
}

/// Whether two label vectors induce the same set partition.
pub fn same_grouping(a: &[usize], b: &[usize]) -> bool {
    let n = a.len();
    (0..n).all(|i| (0..n).all(|j| (a[i] == a[j]) == (b[i] == b[j])))
}

pub fn transitivity(g: &Dense) -> f64 {
    let (mut closed, mut triples) = (0usize, 0usize);
    for center in 0..g.n() {
        for i in 0..g.n() {
            for j in i + 1..g.n() {
                if i != center && j != center && g.adj[center][i] && g.adj[center][j] {
                    triples += 1;
                    if g.adj[i][j] {
                        closed += 1;
                    }
                }
            }
        }
    }
    if triples == 0 {
        0.0
    } else {
        closed as f64 / triples as f64
    }
}

/// Every labelling asynchronous label propagation can stop in on `g`.
///
/// Explores all single-node updates (each node adopting any of its tied
/// majority neighbour labels) from the all-distinct start. A labelling is
/// terminal when one full sweep can leave it unchanged, i.e. each node with
/// neighbours already holds one of its tied majority labels. Returned
/// labellings are canonicalized.
pub fn lpa_terminal_states(g: &Dense) -> BTreeSet<Vec<usize>> {
    let n = g.n();
    let majority = |labels: &[usize], x: usize| -> Vec<usize> {
        let mut counts: BTreeMap<usize, usize> = BTreeMap::new();
        for z in 0..n {
            if g.adj[x][z] {
                *counts.entry(labels[z]).or_default() += 1;
            }
        }
        let best = counts.values().copied().max().unwrap_or(0);
        counts.into_iter().filter(|&(_, c)| c == best).map(|(l, _)| l).collect()
    };
    let start: Vec<usize> = (0..n).collect();
    let mut seen: BTreeSet<Vec<usize>> = BTreeSet::from([start.clone()]);
    let mut stack = vec![start];
    let mut terminal = BTreeSet::new();
    while let Some(labels) = stack.pop() {
        let mut stable = true;
        for x in 0..n {
            if g.degree(x) == 0 {
                continue;
            }
            let options = majority(&labels, x);
            if !options.contains(&labels[x]) {
                stable = false;
            }
            for l in options {
                if l != labels[x] {
                    let mut next = labels.clone();
                    next[x] = l;
                    if seen.insert(next.clone()) {
                        stack.push(next);
                    }
                }
            }
        }
        if stable {
            terminal.insert(canonical(&labels));
        }
    }
    terminal
}

pub fn canonical(labels: &[usize]) -> Vec<usize> {
    let mut map: BTreeMap<usize, usize> = BTreeMap::new();
    labels
        .iter()
        .map(|&l| {
            let next = map.len();
            *map.entry(l).or_insert(next)
        })
        .collect()
}
