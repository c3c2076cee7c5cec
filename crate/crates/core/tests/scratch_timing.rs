use khfk_core::algebra::Coeffs;
use khfk_core::diagram;
use khfk_core::khovanov::{khovanov_homology, s_invariant};
use std::time::Instant;

#[test]
#[ignore]
fn cube_sizes() {
    for (name, d) in [
        ("T45", diagram::torus_diagram(4, 5).unwrap()),
        ("P357", diagram::pretzel_diagram(-3, 5, 7).unwrap()),
    ] {
        let n = d.len();
        let tuples: Vec<[usize; 4]> = d.crossings().iter().map(|c| c.labels()).collect();
        let mut index = std::collections::BTreeMap::new();
        for t in &tuples {
            for &l in t {
                let next = index.len();
                index.entry(l).or_insert(next);
            }
        }
        let arcs = index.len();
        let idx: Vec<[usize; 4]> = tuples.iter().map(|t| t.map(|l| index[&l])).collect();
        let mut total: u64 = 0;
        let mut cmax = 0;
        for mask in 0u64..(1 << n) {
            let mut parent: Vec<usize> = (0..arcs).collect();
            fn root(p: &mut [usize], mut x: usize) -> usize {
                while p[x] != x {
                    p[x] = p[p[x]];
                    x = p[x];
                }
                x
            }
            for (i, t) in idx.iter().enumerate() {
                let pairs = if mask >> i & 1 == 0 {
                    [(t[0], t[1]), (t[2], t[3])]
                } else {
                    [(t[0], t[3]), (t[1], t[2])]
                };
                for (a, b) in pairs {
                    let (ra, rb) = (root(&mut parent, a), root(&mut parent, b));
                    if ra != rb {
                        parent[ra.max(rb)] = ra.min(rb);
                    }
                }
            }
            let c = (0..arcs).filter(|&e| parent[e] == e).count();
            cmax = cmax.max(c);
            total += 1u64 << c;
        }
        println!("{name}: n={n} arcs={arcs} cmax={cmax} total_gens={total}");
    }
}

#[test]
#[ignore]
fn timing_t45_khr() {
    let d = diagram::torus_diagram(4, 5).unwrap();
    let t0 = Instant::now();
    let h = khovanov_homology(&d, true, Coeffs::Zp(2)).unwrap();
    println!("khr T45 F2: {:?} total_rank {}", t0.elapsed(), h.total_rank());
}

#[test]
#[ignore]
fn timing_t45_s() {
    let d = diagram::torus_diagram(4, 5).unwrap();
    let t0 = Instant::now();
    let s = s_invariant(&d).unwrap();
    println!("s T45: {:?} -> {}", t0.elapsed(), s);
    assert_eq!(s, 12);
}

#[test]
#[ignore]
fn timing_pretzel_s() {
    let d = diagram::pretzel_diagram(-3, 5, 7).unwrap();
    let t0 = Instant::now();
    let s = s_invariant(&d).unwrap();
    println!("s P(-3,5,7): {:?} -> {}", t0.elapsed(), s);
}
