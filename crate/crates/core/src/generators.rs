//! Seeded random posets and modules, grids and ladders.

use std::sync::Arc;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::Result;
use crate::field::Scalar;
use crate::hom::HomSpace;
use crate::matrix::Matrix;
use crate::module::{direct_sum_all, injective_at, projective_at, PosetModule};
use crate::poset::Poset;

pub fn seeded(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn numbered(n: usize) -> Vec<String> {
    (0..n).map(|i| i.to_string()).collect()
}

/// Entries drawn from [−2, 2].
pub fn random_matrix<F: Scalar>(rng: &mut impl Rng, rows: usize, cols: usize) -> Matrix<F> {
    let v: Vec<i64> = (0..rows * cols).map(|_| rng.gen_range(-2..=2)).collect();
    Matrix::from_i64(rows, cols, &v)
}

/// A `rows × cols` matrix of full row rank; needs rows ≤ cols.
pub fn random_surjection<F: Scalar>(rng: &mut impl Rng, rows: usize, cols: usize) -> Matrix<F> {
    assert!(rows <= cols);
    loop {
        let m = random_matrix(rng, rows, cols);
        if m.rank() == rows {
            return m;
        }
    }
}

/// Random DAG on `n` objects with edge probability `density`, reduced to its Hasse diagram.
pub fn random_poset(rng: &mut impl Rng, n: usize, density: f64) -> Poset {
    let mut reach = vec![vec![false; n]; n];
    for i in 0..n {
        for j in i + 1..n {
            if rng.gen_bool(density) {
                reach[i][j] = true;
            }
        }
    }
    // transitive closure, vertices already in topological order
    for j in 0..n {
        for i in (0..j).rev() {
            if reach[i][j] {
                for k in 0..i {
                    if reach[k][i] {
                        reach[k][j] = true;
                    }
                }
            }
        }
    }
    let mut covers = Vec::new();
    for i in 0..n {
        for j in i + 1..n {
            if reach[i][j] && !(i + 1..j).any(|k| reach[i][k] && reach[k][j]) {
                covers.push((i, j));
            }
        }
    }
    Poset::from_indexed(numbered(n), covers).expect("reduced acyclic")
}

/// Undirected random tree as a list of (parent, child) pairs, parent < child.
fn random_tree_edges(rng: &mut impl Rng, n: usize) -> Vec<(usize, usize)> {
    (1..n).map(|i| (rng.gen_range(0..i), i)).collect()
}

/// A poset whose Hasse diagram is a tree with random orientations.
pub fn random_tree_poset(rng: &mut impl Rng, n: usize) -> Poset {
    let covers = random_tree_edges(rng, n).into_iter().map(|(a, b)| if rng.gen_bool(0.5) { (a, b) } else { (b, a) }).collect();
    Poset::from_indexed(numbered(n), covers).expect("tree")
}

/// A tree with a unique minimal object `0`.
pub fn random_rooted_tree(rng: &mut impl Rng, n: usize) -> Poset {
    Poset::from_indexed(numbered(n), random_tree_edges(rng, n)).expect("tree")
}

/// A tree in which every object of degree ≥ 2 has covers both in and out, so its line poset is connected.
pub fn random_line_connected_tree(rng: &mut impl Rng, n: usize) -> Poset {
    let edges = random_tree_edges(rng, n);
    let mut children = vec![Vec::new(); n];
    for &(a, b) in &edges {
        children[a].push(b);
    }
    let mut covers = Vec::new();
    // incoming[v]: whether the edge from v's parent points into v
    let mut incoming: Vec<Option<bool>> = vec![None; n];
    for v in 0..n {
        let kids = &children[v];
        for (i, &c) in kids.iter().enumerate() {
            let into_c = match (incoming[v], i) {
                // first child edge opposes the parent edge at v
                (Some(into_v), 0) => into_v,
                // the root has no parent edge: its second edge opposes its first
                (None, 1) => !incoming[kids[0]].expect("set"),
                _ => rng.gen_bool(0.5),
            };
            incoming[c] = Some(into_c);
            covers.push(if into_c { (v, c) } else { (c, v) });
        }
    }
    Poset::from_indexed(numbered(n), covers).expect("tree")
}

/// Random module with dims ≤ `max_dim`.
///
/// On trees every choice of cover matrices commutes, so dims and entries are uniform. Elsewhere the
/// module is the image of a random map ⊕F_v → ⊕G_w between sums of `max_dim` projectives and
/// `max_dim` injectives, which keeps every path agreement automatic.
pub fn random_module<F: Scalar>(rng: &mut impl Rng, p: &Arc<Poset>, max_dim: usize) -> PosetModule<F> {
    if p.is_tree() {
        let dims: Vec<usize> = (0..p.len()).map(|_| rng.gen_range(0..=max_dim)).collect();
        let maps = p.covers().iter().map(|&(u, v)| random_matrix(rng, dims[v], dims[u])).collect();
        return PosetModule::new(p.clone(), dims, maps).expect("tree modules commute");
    }
    if p.is_empty() || max_dim == 0 {
        return PosetModule::zero(p);
    }
    let k = rng.gen_range(1..=max_dim);
    let fs: Vec<PosetModule<F>> = (0..k).map(|_| projective_at(p, rng.gen_range(0..p.len()))).collect();
    let gs: Vec<PosetModule<F>> = (0..k).map(|_| injective_at(p, rng.gen_range(0..p.len()))).collect();
    let src = direct_sum_all(p, &fs.iter().collect::<Vec<_>>()).expect("one poset");
    let tgt = direct_sum_all(p, &gs.iter().collect::<Vec<_>>()).expect("one poset");
    let f = HomSpace::new(&src, &tgt).expect("one poset").random_element(rng, 3);
    f.image(&tgt).0
}

/// Label of grid object (i, j): column i, row j.
pub fn grid_label(i: usize, j: usize) -> String {
    format!("{i}.{j}")
}

/// The product of chains 𝔸_m × 𝔸_n, with horizontal covers (i,j)⋖(i+1,j) and vertical (i,j)⋖(i,j+1).
pub fn grid_poset(m: usize, n: usize) -> Poset {
    let id = |i: usize, j: usize| j * m + i;
    let mut labels = vec![String::new(); m * n];
    let mut covers = Vec::new();
    for j in 0..n {
        for i in 0..m {
            labels[id(i, j)] = grid_label(i, j);
            if i + 1 < m {
                covers.push((id(i, j), id(i + 1, j)));
            }
            if j + 1 < n {
                covers.push((id(i, j), id(i, j + 1)));
            }
        }
    }
    Poset::from_indexed(labels, covers).expect("grid")
}

/// Random module over the m×n grid with surjective horizontal maps.
///
/// Row 0 takes random surjections. Each later row starts from a random vertical map at column 0; at
/// every square with bottom h, left v, the top h' is a random surjection killing v(ker h) and the right
/// side is h'·v·h⁺, which commutes because h is onto.
pub fn gen_grid<F: Scalar>(m: usize, n: usize, seed: u64, max_dim: usize) -> Result<PosetModule<F>> {
    let mut rng = seeded(seed);
    let p = Arc::new(grid_poset(m, n));
    let id = |i: usize, j: usize| j * m + i;
    let mut dims = vec![0usize; m * n];
    let mut maps: Vec<Option<Matrix<F>>> = vec![None; p.num_covers()];
    let hor = |i: usize, j: usize| p.cover_id(id(i, j), id(i + 1, j)).expect("cover");
    let ver = |i: usize, j: usize| p.cover_id(id(i, j), id(i, j + 1)).expect("cover");

    dims[id(0, 0)] = rng.gen_range(1..=max_dim.max(1));
    for i in 0..m.saturating_sub(1) {
        let d = dims[id(i, 0)];
        let d2 = rng.gen_range(0..=d);
        dims[id(i + 1, 0)] = d2;
        maps[hor(i, 0)] = Some(random_surjection(&mut rng, d2, d));
    }
    for j in 0..n.saturating_sub(1) {
        let d0 = rng.gen_range(0..=max_dim);
        dims[id(0, j + 1)] = d0;
        maps[ver(0, j)] = Some(random_matrix(&mut rng, d0, dims[id(0, j)]));
        for i in 0..m.saturating_sub(1) {
            let h = maps[hor(i, j)].clone().expect("set");
            let v = maps[ver(i, j)].clone().expect("set");
            let killed = v.mul(&h.kernel_basis());
            let q = killed.cokernel_projection();
            let d2 = rng.gen_range(0..=q.rows());
            let top = random_surjection(&mut rng, d2, q.rows()).mul(&q);
            let right = top.mul(&v).mul(&h.right_inverse().expect("onto"));
            dims[id(i + 1, j + 1)] = d2;
            maps[hor(i, j + 1)] = Some(top);
            maps[ver(i + 1, j)] = Some(right);
        }
    }
    let maps = maps.into_iter().map(|x| x.expect("every cover set")).collect();
    PosetModule::new(p, dims, maps)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum LadderKind {
    /// FBFB… with n objects per row.
    Zigzag,
    /// FFBB… with 2n arrows, so 2n + 1 objects, per row.
    DoubleZigzag,
}

/// Two rows joined by upward rungs i ⋖ i'. `flipped` gives the BFBF… / BBFF… variants.
pub fn gen_ladder(n: usize, kind: LadderKind, flipped: bool) -> Poset {
    let len = match kind {
        LadderKind::Zigzag => n,
        LadderKind::DoubleZigzag => 2 * n + 1,
    };
    let mut labels: Vec<String> = (1..=len).map(|i| i.to_string()).collect();
    labels.extend((1..=len).map(|i| format!("{i}'")));
    let mut covers: Vec<(usize, usize)> = (0..len).map(|i| (i, i + len)).collect();
    for i in 0..len.saturating_sub(1) {
        let forward = match kind {
            LadderKind::Zigzag => i % 2 == 0,
            LadderKind::DoubleZigzag => (i / 2) % 2 == 0,
        } != flipped;
        for row in [0, len] {
            covers.push(if forward { (row + i, row + i + 1) } else { (row + i + 1, row + i) });
        }
    }
    Poset::from_indexed(labels, covers).expect("ladder")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::Q;
    use crate::line::{is_line_connected, LineMap};

    #[test]
    fn random_posets_are_valid_and_seeded() {
        let a = random_poset(&mut seeded(3), 8, 0.4);
        let b = random_poset(&mut seeded(3), 8, 0.4);
        assert_eq!(a.covers(), b.covers());
        for s in 0..20 {
            let mut rng = seeded(s);
            assert!(random_tree_poset(&mut rng, 9).is_tree());
            assert!(random_rooted_tree(&mut rng, 9).is_rooted_tree());
            let t = Arc::new(random_line_connected_tree(&mut rng, 9));
            assert!(t.is_tree() && is_line_connected(&t));
        }
    }

    #[test]
    fn random_modules_validate() {
        for s in 0..20 {
            let mut rng = seeded(s);
            let p = Arc::new(random_poset(&mut rng, 6, 0.5));
            let m = random_module::<Q>(&mut rng, &p, 3);
            assert!(m.validate().is_ok());
            assert!(m.dims().iter().all(|&d| d <= 3));
        }
    }

    #[test]
    fn grid() {
        let m = gen_grid::<Q>(4, 3, 7, 4).unwrap();
        let p = m.poset();
        assert_eq!(p.len(), 12);
        assert_eq!(p.num_covers(), 3 * 3 + 4 * 2);
        for (k, &(u, v)) in p.covers().iter().enumerate() {
            if p.label(u).split('.').nth(1) == p.label(v).split('.').nth(1) {
                assert_eq!(m.map(k).rank(), m.dim(v));
            }
        }
        assert_eq!(gen_grid::<Q>(4, 3, 7, 4).unwrap(), m);
    }

    #[test]
    fn ladders() {
        let z = gen_ladder(3, LadderKind::Zigzag, false);
        assert_eq!((z.len(), z.num_covers()), (6, 7));
        for n in 2..8 {
            for f in [false, true] {
                let z = Arc::new(gen_ladder(n, LadderKind::Zigzag, f));
                let lz = LineMap::new(&z).line;
                assert!(lz.is_type_a());
                assert!(lz.components().iter().all(|c| c.len() <= 3));
                let d = Arc::new(gen_ladder(n, LadderKind::DoubleZigzag, f));
                let ld = LineMap::new(&d).line;
                assert!(ld.is_type_a() && ld.is_connected(), "n={n}");
            }
        }
    }
}
