//! Finite posets presented by their Hasse diagrams.

use std::collections::{HashMap, VecDeque};
use std::fmt;

use crate::error::{Error, Result};

#[derive(Clone, PartialEq, Eq, Hash)]
pub(crate) struct BitSet(Vec<u64>);

impl BitSet {
    fn new(n: usize) -> Self {
        BitSet(vec![0; n.div_ceil(64)])
    }
    fn insert(&mut self, i: usize) {
        self.0[i / 64] |= 1 << (i % 64);
    }
    fn contains(&self, i: usize) -> bool {
        self.0[i / 64] >> (i % 64) & 1 == 1
    }
    fn union_with(&mut self, o: &BitSet) {
        for (a, b) in self.0.iter_mut().zip(&o.0) {
            *a |= *b;
        }
    }
}

/// A validated finite poset. Objects are addressed by index; labels are kept for I/O.
#[derive(Clone)]
pub struct Poset {
    labels: Vec<String>,
    index: HashMap<String, usize>,
    covers: Vec<(usize, usize)>,
    cover_id: HashMap<(usize, usize), usize>,
    succ: Vec<Vec<usize>>,
    pred: Vec<Vec<usize>>,
    out_covers: Vec<Vec<usize>>,
    in_covers: Vec<Vec<usize>>,
    topo: Vec<usize>,
    up: Vec<BitSet>,
}

impl PartialEq for Poset {
    fn eq(&self, o: &Self) -> bool {
        self.labels == o.labels && self.covers == o.covers
    }
}

impl Eq for Poset {}

impl fmt::Debug for Poset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let covers: Vec<String> =
            self.covers.iter().map(|&(u, v)| format!("{}⋖{}", self.labels[u], self.labels[v])).collect();
        write!(f, "Poset{{objects: {:?}, covers: [{}]}}", self.labels, covers.join(", "))
    }
}

impl Poset {
    /// Build from labels and cover pairs given by label.
    pub fn from_covers<S: AsRef<str>, T: AsRef<str>>(objects: &[S], covers: &[(T, T)]) -> Result<Poset> {
        let labels: Vec<String> = objects.iter().map(|s| s.as_ref().to_string()).collect();
        let mut index = HashMap::new();
        for (i, l) in labels.iter().enumerate() {
            if index.insert(l.clone(), i).is_some() {
                return Err(Error::DuplicateLabel(l.clone()));
            }
        }
        let mut idx = Vec::with_capacity(covers.len());
        for (u, v) in covers {
            let a = *index.get(u.as_ref()).ok_or_else(|| Error::UnknownObject(u.as_ref().into()))?;
            let b = *index.get(v.as_ref()).ok_or_else(|| Error::UnknownObject(v.as_ref().into()))?;
            idx.push((a, b));
        }
        Poset::from_indexed(labels, idx)
    }

    /// Build from labels and cover pairs given by index.
    pub fn from_indexed(labels: Vec<String>, covers: Vec<(usize, usize)>) -> Result<Poset> {
        let n = labels.len();
        let mut index = HashMap::new();
        for (i, l) in labels.iter().enumerate() {
            if index.insert(l.clone(), i).is_some() {
                return Err(Error::DuplicateLabel(l.clone()));
            }
        }
        let mut cover_id = HashMap::new();
        let mut succ = vec![Vec::new(); n];
        let mut pred = vec![Vec::new(); n];
        let mut out_covers = vec![Vec::new(); n];
        let mut in_covers = vec![Vec::new(); n];
        for (k, &(u, v)) in covers.iter().enumerate() {
            if u >= n || v >= n {
                return Err(Error::UnknownObject(format!("#{}", u.max(v))));
            }
            if u == v {
                return Err(Error::Cycle(vec![labels[u].clone(), labels[u].clone()]));
            }
            if cover_id.insert((u, v), k).is_some() {
                return Err(Error::DuplicateCover(labels[u].clone(), labels[v].clone()));
            }
            succ[u].push(v);
            pred[v].push(u);
            out_covers[u].push(k);
            in_covers[v].push(k);
        }

        // Kahn; leftover vertices lie on or behind a cycle.
        let mut indeg: Vec<usize> = pred.iter().map(|p| p.len()).collect();
        let mut queue: VecDeque<usize> = (0..n).filter(|&x| indeg[x] == 0).collect();
        let mut topo = Vec::with_capacity(n);
        while let Some(x) = queue.pop_front() {
            topo.push(x);
            for &y in &succ[x] {
                indeg[y] -= 1;
                if indeg[y] == 0 {
                    queue.push_back(y);
                }
            }
        }
        if topo.len() < n {
            return Err(Error::Cycle(find_cycle(&pred, &indeg).iter().map(|&i| labels[i].clone()).collect()));
        }

        let mut up = vec![BitSet::new(n); n];
        for &x in topo.iter().rev() {
            let mut s = BitSet::new(n);
            s.insert(x);
            for &y in &succ[x] {
                s.union_with(&up[y]);
            }
            up[x] = s;
        }

        for &(u, v) in &covers {
            if let Some(&w) = succ[u].iter().find(|&&w| w != v && up[w].contains(v)) {
                let mut path = vec![u];
                path.extend(bfs_path(&succ, w, v).expect("reachable"));
                return Err(Error::NotReduced {
                    u: labels[u].clone(),
                    v: labels[v].clone(),
                    path: path.iter().map(|&i| labels[i].clone()).collect(),
                });
            }
        }

        Ok(Poset { labels, index, covers, cover_id, succ, pred, out_covers, in_covers, topo, up })
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn label(&self, i: usize) -> &str {
        &self.labels[i]
    }

    pub fn index_of(&self, label: &str) -> Option<usize> {
        self.index.get(label).copied()
    }

    pub fn require(&self, label: &str) -> Result<usize> {
        self.index_of(label).ok_or_else(|| Error::UnknownObject(label.to_string()))
    }

    pub fn covers(&self) -> &[(usize, usize)] {
        &self.covers
    }

    pub fn num_covers(&self) -> usize {
        self.covers.len()
    }

    pub fn cover(&self, id: usize) -> (usize, usize) {
        self.covers[id]
    }

    pub fn cover_id(&self, u: usize, v: usize) -> Option<usize> {
        self.cover_id.get(&(u, v)).copied()
    }

    pub fn cover_label(&self, id: usize) -> String {
        let (u, v) = self.covers[id];
        format!("{},{}", self.labels[u], self.labels[v])
    }

    pub fn succ(&self, x: usize) -> &[usize] {
        &self.succ[x]
    }

    pub fn pred(&self, x: usize) -> &[usize] {
        &self.pred[x]
    }

    /// Ids of covers leaving `x`.
    pub fn out_covers(&self, x: usize) -> &[usize] {
        &self.out_covers[x]
    }

    /// Ids of covers entering `x`.
    pub fn in_covers(&self, x: usize) -> &[usize] {
        &self.in_covers[x]
    }

    pub fn leq(&self, a: usize, b: usize) -> bool {
        self.up[a].contains(b)
    }

    pub fn lt(&self, a: usize, b: usize) -> bool {
        a != b && self.leq(a, b)
    }

    pub fn comparable(&self, a: usize, b: usize) -> bool {
        self.leq(a, b) || self.leq(b, a)
    }

    /// A linear extension; sources first.
    pub fn topo_order(&self) -> &[usize] {
        &self.topo
    }

    pub fn up_set(&self, x: usize) -> Vec<usize> {
        (0..self.len()).filter(|&y| self.leq(x, y)).collect()
    }

    pub fn down_set(&self, x: usize) -> Vec<usize> {
        (0..self.len()).filter(|&y| self.leq(y, x)).collect()
    }

    /// All pairs x ≤ y, identities included.
    pub fn relations(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::new();
        for x in 0..self.len() {
            for y in 0..self.len() {
                if self.leq(x, y) {
                    out.push((x, y));
                }
            }
        }
        out
    }

    pub fn minimal(&self) -> Vec<usize> {
        (0..self.len()).filter(|&x| self.pred[x].is_empty()).collect()
    }

    pub fn maximal(&self) -> Vec<usize> {
        (0..self.len()).filter(|&x| self.succ[x].is_empty()).collect()
    }

    /// Some directed cover path from `a` to `b`, endpoints included.
    pub fn path(&self, a: usize, b: usize) -> Option<Vec<usize>> {
        if !self.leq(a, b) {
            return None;
        }
        let mut p = vec![a];
        let mut cur = a;
        while cur != b {
            cur = *self.succ[cur].iter().find(|&&s| self.leq(s, b)).expect("closure is consistent");
            p.push(cur);
        }
        Some(p)
    }

    /// Number of directed cover paths from `a` to every object, saturating at `cap`.
    pub fn path_counts_from(&self, a: usize, cap: u64) -> Vec<u64> {
        let mut cnt = vec![0u64; self.len()];
        cnt[a] = 1;
        for &x in &self.topo {
            if cnt[x] == 0 {
                continue;
            }
            for &y in &self.succ[x] {
                cnt[y] = (cnt[y] + cnt[x]).min(cap);
            }
        }
        cnt
    }

    /// At most one directed path between any two objects.
    pub fn is_tree(&self) -> bool {
        (0..self.len()).all(|a| self.path_counts_from(a, 2).iter().all(|&c| c <= 1))
    }

    /// A tree with a unique minimal object.
    pub fn is_rooted_tree(&self) -> bool {
        self.minimal().len() == 1 && self.is_tree()
    }

    /// Every component of the cover graph is a path (Dynkin type A, any orientation).
    pub fn is_type_a(&self) -> bool {
        let degree_ok = (0..self.len()).all(|x| self.succ[x].len() + self.pred[x].len() <= 2);
        let edges = self.covers.len();
        degree_ok && edges + self.components().len() == self.len()
    }

    pub fn is_chain(&self) -> bool {
        (0..self.len()).all(|a| (0..self.len()).all(|b| self.comparable(a, b)))
    }

    /// Number of covers on the longest chain.
    pub fn height(&self) -> usize {
        let mut h = vec![0usize; self.len()];
        for &x in &self.topo {
            for &y in &self.succ[x] {
                h[y] = h[y].max(h[x] + 1);
            }
        }
        h.into_iter().max().unwrap_or(0)
    }

    /// Connected components of the cover graph, ignoring direction.
    pub fn components(&self) -> Vec<Vec<usize>> {
        let mut seen = vec![false; self.len()];
        let mut out = Vec::new();
        for s in 0..self.len() {
            if seen[s] {
                continue;
            }
            let mut comp = vec![];
            let mut stack = vec![s];
            seen[s] = true;
            while let Some(x) = stack.pop() {
                comp.push(x);
                for &y in self.succ[x].iter().chain(&self.pred[x]) {
                    if !seen[y] {
                        seen[y] = true;
                        stack.push(y);
                    }
                }
            }
            comp.sort_unstable();
            out.push(comp);
        }
        out
    }

    pub fn is_connected(&self) -> bool {
        self.components().len() <= 1
    }

    /// Full sub-poset on `objs` (in that order) with its own Hasse diagram.
    pub fn full_subposet(&self, objs: &[usize]) -> Poset {
        let labels = objs.iter().map(|&i| self.labels[i].clone()).collect();
        let mut covers = Vec::new();
        for (a, &x) in objs.iter().enumerate() {
            for (b, &y) in objs.iter().enumerate() {
                if self.lt(x, y) && !objs.iter().any(|&z| self.lt(x, z) && self.lt(z, y)) {
                    covers.push((a, b));
                }
            }
        }
        Poset::from_indexed(labels, covers).expect("induced order is a poset")
    }

    /// Sub-poset generated by a set of covers: the touched objects (ascending index) with exactly those covers.
    pub fn generated_subposet(&self, cover_ids: &[usize]) -> (Poset, Vec<usize>) {
        let mut objs: Vec<usize> = cover_ids.iter().flat_map(|&c| [self.covers[c].0, self.covers[c].1]).collect();
        objs.sort_unstable();
        objs.dedup();
        self.subgraph_poset(&objs, cover_ids)
    }

    /// Poset on `objs` whose Hasse diagram is the given subset of covers.
    pub fn subgraph_poset(&self, objs: &[usize], cover_ids: &[usize]) -> (Poset, Vec<usize>) {
        let pos: HashMap<usize, usize> = objs.iter().enumerate().map(|(i, &o)| (o, i)).collect();
        let labels = objs.iter().map(|&i| self.labels[i].clone()).collect();
        let covers = cover_ids
            .iter()
            .map(|&c| {
                let (u, v) = self.covers[c];
                (pos[&u], pos[&v])
            })
            .collect();
        // a subset of Hasse edges is again transitively reduced
        (Poset::from_indexed(labels, covers).expect("cover subsets are Hasse diagrams"), objs.to_vec())
    }

    /// y together with its cover-predecessors and cover-successors, and the covers through y.
    pub fn neighborhood(&self, y: usize) -> (Poset, Vec<usize>) {
        let mut objs = vec![y];
        objs.extend(&self.pred[y]);
        objs.extend(&self.succ[y]);
        objs.sort_unstable();
        let covers: Vec<usize> = self.in_covers[y].iter().chain(&self.out_covers[y]).copied().collect();
        self.subgraph_poset(&objs, &covers)
    }

    /// Σ_d (−1)^d · #{strict chains x₀ < … < x_d}.
    pub fn nerve_euler_characteristic(&self) -> i128 {
        // f(x) = Σ_d (−1)^d · #chains with top x = 1 − Σ_{w<x} f(w)
        let mut f = vec![0i128; self.len()];
        for &x in &self.topo {
            let below: i128 = (0..self.len()).filter(|&w| self.lt(w, x)).map(|w| f[w]).sum();
            f[x] = 1 - below;
        }
        f.iter().sum()
    }

    /// Chain 0 ⋖ 1 ⋖ … ⋖ n−1 with numeric labels.
    pub fn chain(n: usize) -> Poset {
        let labels = (0..n).map(|i| i.to_string()).collect();
        let covers = (1..n).map(|i| (i - 1, i)).collect();
        Poset::from_indexed(labels, covers).expect("chain")
    }
}

fn bfs_path(succ: &[Vec<usize>], from: usize, to: usize) -> Option<Vec<usize>> {
    let mut prev = vec![usize::MAX; succ.len()];
    let mut queue = VecDeque::from([from]);
    prev[from] = from;
    while let Some(x) = queue.pop_front() {
        if x == to {
            let mut p = vec![to];
            let mut c = to;
            while c != from {
                c = prev[c];
                p.push(c);
            }
            p.reverse();
            return Some(p);
        }
        for &y in &succ[x] {
            if prev[y] == usize::MAX {
                prev[y] = x;
                queue.push_back(y);
            }
        }
    }
    None
}

fn find_cycle(pred: &[Vec<usize>], indeg: &[usize]) -> Vec<usize> {
    // unprocessed vertices always keep an unprocessed predecessor; walk backwards until a repeat
    let left: Vec<bool> = indeg.iter().map(|&d| d > 0).collect();
    let mut pos = vec![usize::MAX; pred.len()];
    let mut walk = vec![];
    let mut cur = left.iter().position(|&b| b).expect("leftover vertex");
    while pos[cur] == usize::MAX {
        pos[cur] = walk.len();
        walk.push(cur);
        cur = *pred[cur].iter().find(|&&y| left[y]).expect("leftover predecessor");
    }
    let mut cyc = walk[pos[cur]..].to_vec();
    cyc.push(cur);
    cyc.reverse();
    cyc
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    pub(crate) fn diamond() -> Poset {
        Poset::from_covers(&["bot", "a", "b", "top"], &[("bot", "a"), ("bot", "b"), ("a", "top"), ("b", "top")])
            .unwrap()
    }

    #[test]
    fn single_object() {
        let p = Poset::from_covers::<_, &str>(&["a"], &[]).unwrap();
        assert_eq!(p.len(), 1);
        assert_eq!(p.relations(), vec![(0, 0)]);
        assert_eq!(p.nerve_euler_characteristic(), 1);
    }

    #[test]
    fn diamond_closure() {
        let p = diamond();
        let rel = p.relations();
        let strict = rel.iter().filter(|(a, b)| a != b).count();
        assert_eq!(rel.len() - strict, 4);
        assert_eq!(strict, 5);
        assert!(p.leq(0, 3));
        assert!(!p.comparable(1, 2));
        assert_eq!(p.nerve_euler_characteristic(), 1);
        assert!(!p.is_tree());
        assert!(!p.is_rooted_tree());
    }

    #[test]
    fn rejects_cycles_and_shortcuts() {
        let e = Poset::from_covers(&["x", "y"], &[("x", "y"), ("y", "x")]).unwrap_err();
        assert!(matches!(e, Error::Cycle(_)), "{e:?}");
        let e = Poset::from_covers(&["a", "b", "c"], &[("a", "b"), ("b", "c"), ("a", "c")]).unwrap_err();
        match e {
            Error::NotReduced { u, v, path } => {
                assert_eq!((u.as_str(), v.as_str()), ("a", "c"));
                assert_eq!(path, vec!["a", "b", "c"]);
            }
            other => panic!("{other:?}"),
        }
        let e = Poset::from_covers(&["a", "b"], &[("a", "b"), ("a", "b")]).unwrap_err();
        assert!(matches!(e, Error::DuplicateCover(..)));
        let e = Poset::from_covers(&["a", "a"], &[] as &[(&str, &str)]).unwrap_err();
        assert!(matches!(e, Error::DuplicateLabel(_)));
        let e = Poset::from_covers(&["a"], &[("a", "z")]).unwrap_err();
        assert!(matches!(e, Error::UnknownObject(_)));
    }

    #[test]
    fn cycle_witness_is_a_cycle() {
        let p = Poset::from_covers(&["s", "a", "b", "c"], &[("s", "a"), ("a", "b"), ("b", "c"), ("c", "a")]);
        match p.unwrap_err() {
            Error::Cycle(c) => {
                assert_eq!(c.first(), c.last());
                assert!(c.len() == 4);
                assert!(!c.contains(&"s".to_string()));
            }
            e => panic!("{e:?}"),
        }
    }

    #[test]
    fn trees() {
        let chain = Poset::chain(4);
        assert!(chain.is_tree() && chain.is_rooted_tree() && chain.is_chain());
        assert_eq!(chain.height(), 3);
        let out = Poset::from_covers(&["r", "a", "b"], &[("r", "a"), ("r", "b")]).unwrap();
        assert!(out.is_tree() && out.is_rooted_tree());
        let inn = Poset::from_covers(&["a", "b", "r"], &[("a", "r"), ("b", "r")]).unwrap();
        assert!(inn.is_tree() && !inn.is_rooted_tree());
    }

    #[test]
    fn nerve_chain_and_antichain() {
        assert_eq!(Poset::chain(2).nerve_euler_characteristic(), 1);
        let anti = Poset::from_covers::<_, &str>(&["a", "b"], &[]).unwrap();
        assert_eq!(anti.nerve_euler_characteristic(), 2);
        // crown: a circle
        let crown = Poset::from_covers(&["a", "b", "c", "d"], &[("a", "c"), ("a", "d"), ("b", "c"), ("b", "d")])
            .unwrap();
        assert_eq!(crown.nerve_euler_characteristic(), 0);
    }

    #[test]
    fn neighborhoods() {
        let c = Poset::chain(3);
        let (n, objs) = c.neighborhood(1);
        assert_eq!(objs, vec![0, 1, 2]);
        assert_eq!(n.num_covers(), 2);
        let c4 = Poset::chain(4);
        let (n, objs) = c4.neighborhood(1);
        assert_eq!(objs, vec![0, 1, 2]);
        assert_eq!(n.labels(), &["0", "1", "2"]);
        let star = Poset::from_covers(&["r", "a", "b"], &[("r", "a"), ("r", "b")]).unwrap();
        assert_eq!(star.neighborhood(0).1, vec![0, 1, 2]);
    }

    #[test]
    fn full_subposet_reduces() {
        let c = Poset::chain(4);
        let s = c.full_subposet(&[0, 2, 3]);
        assert_eq!(s.covers(), &[(0, 1), (1, 2)]);
    }

    fn dfs_reach(p: &Poset, a: usize, b: usize) -> bool {
        let mut stack = vec![a];
        let mut seen = vec![false; p.len()];
        while let Some(x) = stack.pop() {
            if x == b {
                return true;
            }
            if !std::mem::replace(&mut seen[x], true) {
                stack.extend(p.succ(x));
            }
        }
        false
    }

    proptest! {
        #[test]
        fn closure_matches_path_search(n in 1usize..8, edges in proptest::collection::vec((0usize..8, 0usize..8), 0..14)) {
            // keep only forward edges of a fixed linear order, then transitively reduce
            let mut cov: Vec<(usize, usize)> = edges.into_iter().filter(|&(a, b)| a < b && b < n).collect();
            cov.sort_unstable();
            cov.dedup();
            let reach = |cov: &[(usize, usize)], a: usize, b: usize, skip: usize| {
                let mut stack = vec![a];
                let mut seen = vec![false; n];
                while let Some(x) = stack.pop() {
                    if x == b { return true; }
                    if std::mem::replace(&mut seen[x], true) { continue; }
                    for (k, &(u, v)) in cov.iter().enumerate() {
                        if k != skip && u == x { stack.push(v); }
                    }
                }
                false
            };
            let reduced: Vec<(usize, usize)> = cov.iter().enumerate()
                .filter(|&(k, &(a, b))| !reach(&cov, a, b, k)).map(|(_, &e)| e).collect();
            let labels = (0..n).map(|i| format!("x{i}")).collect();
            let p = Poset::from_indexed(labels, reduced).unwrap();
            for a in 0..n {
                for b in 0..n {
                    prop_assert_eq!(p.leq(a, b), dfs_reach(&p, a, b));
                }
            }
        }
    }
}
