use super::pd::PlanarDiagram;
use crate::error::{Error, InputError, Result};
use std::collections::{BTreeMap, HashMap};

/// Closure of the positive braid (sigma_1 ... sigma_{p-1})^q on p strands:
/// the (p, q) torus link with (p-1) * q crossings, all positive.
pub fn torus_braid_diagram(p: usize, q: usize) -> Result<PlanarDiagram> {
    if p < 2 {
        return Err(Error::Input(InputError::InvalidParameter(format!(
            "torus braid needs p >= 2, got {p}"
        ))));
    }
    if q < 1 {
        return Err(Error::Input(InputError::InvalidParameter(format!(
            "torus braid needs q >= 1, got {q}"
        ))));
    }
    let mut fresh = 0usize;
    let mut new_label = || {
        fresh += 1;
        fresh
    };
    let initial: Vec<usize> = (0..p).map(|_| new_label()).collect();
    let mut pos = initial.clone();
    let mut tuples: Vec<[usize; 4]> = Vec::new();
    for _ in 0..q {
        for i in 0..p - 1 {
            // positive generator: left strand goes under, right goes over
            //   nw = pos[i] (under in), ne = pos[i+1] (over in)
            //   sw = over out, se = under out
            let nw = pos[i];
            let ne = pos[i + 1];
            let sw = new_label();
            let se = new_label();
            tuples.push([nw, sw, se, ne]);
            pos[i] = sw;
            pos[i + 1] = se;
        }
    }
    // close the braid: bottom of strand i rejoins its top
    let mut uf = UnionFind::new(fresh + 1);
    for i in 0..p {
        uf.union(pos[i], initial[i]);
    }
    let relabeled = relabel(&tuples, &mut uf);
    PlanarDiagram::from_crossings(&relabeled)
}

/// Standard 3-band pretzel diagram P(k1, k2, k3): three vertical twist
/// regions joined by top and bottom arcs; |k| crossings per band, handedness
/// by the sign of k. Positive k twists with the strand entering from the
/// upper right passing over.
pub fn pretzel_diagram(k1: i64, k2: i64, k3: i64) -> Result<PlanarDiagram> {
    for (name, k) in [("first", k1), ("second", k2), ("third", k3)] {
        if k == 0 {
            return Err(Error::Input(InputError::InvalidParameter(format!(
                "{name} pretzel parameter is zero"
            ))));
        }
    }
    let mut fresh = 0usize;
    let mut new_label = || {
        fresh += 1;
        fresh
    };
    let mut tuples: Vec<[usize; 4]> = Vec::new();
    let mut tops: Vec<(usize, usize)> = Vec::new();
    let mut bots: Vec<(usize, usize)> = Vec::new();
    for &k in &[k1, k2, k3] {
        let top = (new_label(), new_label());
        let (mut l, mut r) = top;
        for _ in 0..k.unsigned_abs() {
            let (sw, se) = (new_label(), new_label());
            if k > 0 {
                // over-strand enters at the upper right (ne): tuple from under-in nw
                tuples.push([l, sw, se, r]);
            } else {
                // over-strand enters at the upper left: under runs ne -> sw
                tuples.push([r, l, sw, se]);
            }
            l = sw;
            r = se;
        }
        tops.push(top);
        bots.push((l, r));
    }
    let mut uf = UnionFind::new(fresh + 1);
    // top closure: outer arc joins band 1 left to band 3 right; inner arcs
    // join neighbouring bands
    uf.union(tops[0].0, tops[2].1);
    uf.union(tops[0].1, tops[1].0);
    uf.union(tops[1].1, tops[2].0);
    // bottom closure mirrors the top
    uf.union(bots[0].0, bots[2].1);
    uf.union(bots[0].1, bots[1].0);
    uf.union(bots[1].1, bots[2].0);
    let mut relabeled = relabel(&tuples, &mut uf);
    normalize_under(&mut relabeled);
    PlanarDiagram::from_crossings(&relabeled)
}

/// Rotate tuples so the under-strand always runs from slot 0 to slot 2.
/// Band generators write the under-in at the top, but the closure may orient
/// some strands upward; trace each component and fix the offenders. The
/// direction of each component is chosen arbitrarily.
fn normalize_under(tuples: &mut [[usize; 4]]) {
    let mut ends: BTreeMap<usize, Vec<(usize, usize)>> = BTreeMap::new();
    for (x, t) in tuples.iter().enumerate() {
        for (s, &lab) in t.iter().enumerate() {
            ends.entry(lab).or_default().push((x, s));
        }
    }
    // incoming[(crossing, slot)] = strand flows into the crossing there
    let mut incoming: HashMap<(usize, usize), bool> = HashMap::new();
    for e in ends.values() {
        if incoming.contains_key(&e[0]) {
            continue;
        }
        // orient this component: the arc flows from e[0] to e[1]
        incoming.insert(e[0], false);
        let (mut x, mut s) = e[1];
        while !incoming.contains_key(&(x, s)) {
            incoming.insert((x, s), true);
            let t = (s + 2) % 4;
            incoming.insert((x, t), false);
            let pair = &ends[&tuples[x][t]];
            (x, s) = if pair[0] == (x, t) { pair[1] } else { pair[0] };
        }
    }
    for (x, t) in tuples.iter_mut().enumerate() {
        if !incoming[&(x, 0)] {
            *t = [t[2], t[3], t[0], t[1]];
        }
    }
}

struct UnionFind {
    parent: Vec<usize>,
}

impl UnionFind {
    fn new(n: usize) -> Self {
        UnionFind {
            parent: (0..n).collect(),
        }
    }
    fn find(&mut self, x: usize) -> usize {
        if self.parent[x] != x {
            let root = self.find(self.parent[x]);
            self.parent[x] = root;
        }
        self.parent[x]
    }
    fn union(&mut self, a: usize, b: usize) {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra != rb {
            self.parent[ra.max(rb)] = ra.min(rb);
        }
    }
}

/// Replace labels by their union-find class, renumbered 1.. in order of
/// first appearance for a stable output.
fn relabel(tuples: &[[usize; 4]], uf: &mut UnionFind) -> Vec<[usize; 4]> {
    let mut assign: std::collections::HashMap<usize, usize> = std::collections::HashMap::new();
    let mut next = 0usize;
    let mut out = Vec::with_capacity(tuples.len());
    for t in tuples {
        let mut nt = [0usize; 4];
        for (i, &l) in t.iter().enumerate() {
            let root = uf.find(l);
            let id = *assign.entry(root).or_insert_with(|| {
                next += 1;
                next
            });
            nt[i] = id;
        }
        out.push(nt);
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn torus_2_3_is_right_trefoil() {
        let d = torus_braid_diagram(2, 3).unwrap();
        assert_eq!(d.len(), 3);
        assert_eq!(d.writhe(), 3);
        assert_eq!(d.components(), 1);
        assert_eq!(d.positive_crossings(), 3);
    }

    #[test]
    fn torus_4_5_counts() {
        let d = torus_braid_diagram(4, 5).unwrap();
        assert_eq!(d.len(), 15);
        assert_eq!(d.positive_crossings(), 15);
        assert_eq!(d.components(), 1);
    }

    #[test]
    fn torus_2_2_is_hopf() {
        let d = torus_braid_diagram(2, 2).unwrap();
        assert_eq!(d.components(), 2);
        assert_eq!(d.len(), 2);
        assert_eq!(d.writhe(), 2);
    }

    #[test]
    fn torus_errors() {
        assert!(torus_braid_diagram(1, 3).is_err());
        assert!(torus_braid_diagram(2, 0).is_err());
    }

    #[test]
    fn pretzel_basic() {
        // in this construction P(1,1,1) comes out as the left trefoil
        let d = pretzel_diagram(1, 1, 1).unwrap();
        assert_eq!(d.len(), 3);
        assert_eq!(d.components(), 1);
        assert_eq!(d.writhe(), -3);
        let d = pretzel_diagram(-3, 5, 7).unwrap();
        assert_eq!(d.len(), 15);
        assert_eq!(d.components(), 1);
        assert!(pretzel_diagram(0, 1, 1).is_err());
    }

    #[test]
    fn pretzel_mirror_pair() {
        let d = pretzel_diagram(-1, -1, -1).unwrap();
        assert_eq!(d.writhe(), 3);
        assert_eq!(d.components(), 1);
    }
}
