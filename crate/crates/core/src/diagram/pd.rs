use crate::error::{Error, InputError, Result};
use std::collections::{BTreeMap, HashMap};

/// One crossing of a planar diagram: the four incident arc labels listed
/// counterclockwise starting from the incoming under-strand.
///
/// ```text
///     d   c
///      \ /
///       \        (a, b, c, d); the under-strand runs a -> c.
///      / \
///     a   b
/// ```
///
/// The crossing is positive when the over-strand runs d -> b.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Crossing(pub [usize; 4]);

impl Crossing {
    pub fn labels(&self) -> [usize; 4] {
        self.0
    }
}

/// An oriented link diagram as a PD code with orientation and signs resolved.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PlanarDiagram {
    crossings: Vec<Crossing>,
    /// per crossing: true when the over-strand enters at slot d (positive style)
    over_in_at_d: Vec<bool>,
    signs: Vec<i8>,
    components: usize,
}

impl PlanarDiagram {
    /// Build from raw crossing tuples, inferring orientation and signs.
    pub fn from_crossings(tuples: &[[usize; 4]]) -> Result<Self> {
        build(tuples, None)
    }

    pub fn crossings(&self) -> &[Crossing] {
        &self.crossings
    }

    pub fn len(&self) -> usize {
        self.crossings.len()
    }

    pub fn is_empty(&self) -> bool {
        self.crossings.is_empty()
    }

    pub fn components(&self) -> usize {
        self.components
    }

    pub fn sign(&self, i: usize) -> i8 {
        self.signs[i]
    }

    /// True when the over-strand of crossing i runs d -> b.
    pub fn over_in_at_d(&self, i: usize) -> bool {
        self.over_in_at_d[i]
    }

    pub fn positive_crossings(&self) -> usize {
        self.signs.iter().filter(|&&s| s > 0).count()
    }

    pub fn negative_crossings(&self) -> usize {
        self.signs.iter().filter(|&&s| s < 0).count()
    }

    pub fn writhe(&self) -> i64 {
        self.signs.iter().map(|&s| s as i64).sum()
    }

    /// All arc labels in ascending order.
    pub fn arcs(&self) -> Vec<usize> {
        let mut v: Vec<usize> = self
            .crossings
            .iter()
            .flat_map(|c| c.0.iter().cloned())
            .collect();
        v.sort_unstable();
        v.dedup();
        v
    }

    /// Mirror image: reflect every crossing, swapping over and under.
    /// On tuples this is (a, b, c, d) -> (a, d, c, b); all signs flip.
    pub fn mirror(&self) -> Self {
        let tuples: Vec<[usize; 4]> = self
            .crossings
            .iter()
            .map(|c| {
                let [a, b, cc, d] = c.0;
                [a, d, cc, b]
            })
            .collect();
        build(&tuples, None).expect("mirror of a valid diagram is valid")
    }

    /// Byte-stable text form accepted back by parse_pd.
    pub fn serialize(&self) -> String {
        let body = self
            .crossings
            .iter()
            .map(|c| format!("X[{},{},{},{}]", c.0[0], c.0[1], c.0[2], c.0[3]))
            .collect::<Vec<_>>()
            .join(" ");
        format!("components={}\n{}\n", self.components, body)
    }
}

/// Parse the PD text format: tokens `X[a,b,c,d]` separated by commas or
/// whitespace, or one `X a b c d` per line; optional `components=n` header.
pub fn parse_pd(text: &str) -> Result<PlanarDiagram> {
    let mut declared: Option<usize> = None;
    let mut tuples: Vec<[usize; 4]> = Vec::new();
    for (lineno, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        if let Some(rest) = line.strip_prefix("components=") {
            declared = Some(rest.trim().parse().map_err(|_| {
                Error::Input(InputError::MalformedTuple {
                    location: format!("line {}", lineno + 1),
                    reason: format!("bad component count {rest:?}"),
                })
            })?);
            continue;
        }
        parse_line(line, lineno + 1, &mut tuples)?;
    }
    build(&tuples, declared)
}

fn parse_line(line: &str, lineno: usize, out: &mut Vec<[usize; 4]>) -> Result<()> {
    let bad = |reason: String| {
        Error::Input(InputError::MalformedTuple {
            location: format!("line {lineno}"),
            reason,
        })
    };
    // bracketed form: X[a,b,c,d] possibly several per line
    if line.contains('[') {
        let mut rest = line;
        while let Some(start) = rest.find('X') {
            let after = &rest[start + 1..];
            let Some(open) = after.find('[') else {
                return Err(bad("expected [ after X".into()));
            };
            if after[..open].trim() != "" {
                return Err(bad("unexpected text between X and [".into()));
            }
            let Some(close) = after.find(']') else {
                return Err(bad("unclosed [".into()));
            };
            let nums: Vec<&str> = after[open + 1..close].split(',').map(|s| s.trim()).collect();
            if nums.len() != 4 {
                return Err(bad(format!("crossing needs 4 labels, got {}", nums.len())));
            }
            let mut t = [0usize; 4];
            for (i, n) in nums.iter().enumerate() {
                t[i] = n
                    .parse()
                    .map_err(|_| bad(format!("bad arc label {n:?}")))?;
            }
            out.push(t);
            rest = &after[close + 1..];
        }
        return Ok(());
    }
    // line form: X a b c d
    let toks: Vec<&str> = line.split_whitespace().collect();
    if toks.len() != 5 || toks[0] != "X" {
        return Err(bad("expected X[a,b,c,d] or `X a b c d`".into()));
    }
    let mut t = [0usize; 4];
    for (i, n) in toks[1..].iter().enumerate() {
        t[i] = n
            .parse()
            .map_err(|_| bad(format!("bad arc label {n:?}")))?;
    }
    out.push(t);
    Ok(())
}

fn build(tuples: &[[usize; 4]], declared: Option<usize>) -> Result<PlanarDiagram> {
    // every label must occur exactly twice
    let mut count: BTreeMap<usize, usize> = BTreeMap::new();
    for t in tuples {
        for &l in t {
            *count.entry(l).or_insert(0) += 1;
        }
    }
    for (&label, &c) in &count {
        if c != 2 {
            return Err(Error::Input(InputError::ArcMultiplicity { label, count: c }));
        }
    }

    let over_in_at_d = orient(tuples)?;

    // signs: positive when over runs d -> b
    let signs: Vec<i8> = over_in_at_d.iter().map(|&d| if d { 1 } else { -1 }).collect();

    // trace components: successor of an arc is the label leaving the crossing
    // that the arc enters
    let mut next: HashMap<usize, usize> = HashMap::new();
    for (x, t) in tuples.iter().enumerate() {
        // under strand: a -> c
        next.insert(t[0], t[2]);
        // over strand
        if over_in_at_d[x] {
            next.insert(t[3], t[1]);
        } else {
            next.insert(t[1], t[3]);
        }
    }
    let mut seen: BTreeMap<usize, bool> = count.keys().map(|&l| (l, false)).collect();
    let mut components = 0;
    for &start in count.keys() {
        if seen[&start] {
            continue;
        }
        components += 1;
        let mut cur = start;
        loop {
            if seen[&cur] {
                return Err(Error::Input(InputError::NonClosing {
                    reason: format!("arc {cur} revisited before closing"),
                }));
            }
            seen.insert(cur, true);
            let Some(&nxt) = next.get(&cur) else {
                return Err(Error::Input(InputError::NonClosing {
                    reason: format!("arc {cur} has no successor"),
                }));
            };
            if nxt == start {
                break;
            }
            cur = nxt;
        }
    }

    // a crossingless diagram denotes the 0-crossing unknot
    if tuples.is_empty() {
        components = 1;
    }

    if let Some(n) = declared {
        if n != components {
            return Err(Error::Input(InputError::ComponentMismatch {
                declared: n,
                actual: components,
            }));
        }
    }

    Ok(PlanarDiagram {
        crossings: tuples.iter().map(|&t| Crossing(t)).collect(),
        over_in_at_d,
        signs,
        components,
    })
}

/// Decide, per crossing, whether the over-strand enters at slot d.
/// The under-strand fixes slot a as an arc head and slot c as a tail; the
/// over directions are propagated so that every arc has exactly one head and
/// one tail. Crossings left free (components that never go under) default to
/// over entering at d.
fn orient(tuples: &[[usize; 4]]) -> Result<Vec<bool>> {
    let n = tuples.len();
    // occurrences: label -> list of (crossing, slot)
    let mut occ: HashMap<usize, Vec<(usize, usize)>> = HashMap::new();
    for (x, t) in tuples.iter().enumerate() {
        for (s, &l) in t.iter().enumerate() {
            occ.entry(l).or_default().push((x, s));
        }
    }
    // over_dir[x]: None undecided, Some(true) = over in at d
    let mut over_dir: Vec<Option<bool>> = vec![None; n];
    let mut queue: Vec<(usize, bool)> = Vec::new();

    // a slot is a head iff the arc flows into the crossing there
    let head_state = |slot: usize, dir_d: bool| -> bool {
        match slot {
            0 => true,
            2 => false,
            1 => !dir_d,
            3 => dir_d,
            _ => unreachable!(),
        }
    };

    // seed from labels with at least one under occurrence
    for (label, places) in &occ {
        let (p0, p1) = (places[0], places[1]);
        let fixed = |slot: usize| slot == 0 || slot == 2;
        match (fixed(p0.1), fixed(p1.1)) {
            (true, true) => {
                let h0 = head_state(p0.1, false);
                let h1 = head_state(p1.1, false);
                if h0 == h1 {
                    return Err(Error::Input(InputError::NonClosing {
                        reason: format!("arc {label} cannot be oriented consistently"),
                    }));
                }
            }
            (true, false) => {
                let h0 = head_state(p0.1, false);
                // the over occurrence must take the opposite role
                let want_head = !h0;
                let dir = match p1.1 {
                    1 => !want_head,
                    3 => want_head,
                    _ => unreachable!(),
                };
                queue.push((p1.0, dir));
            }
            (false, true) => {
                let h1 = head_state(p1.1, false);
                let want_head = !h1;
                let dir = match p0.1 {
                    1 => !want_head,
                    3 => want_head,
                    _ => unreachable!(),
                };
                queue.push((p0.0, dir));
            }
            (false, false) => {}
        }
    }

    loop {
        while let Some((x, dir)) = queue.pop() {
            match over_dir[x] {
                Some(d) if d != dir => {
                    return Err(Error::Input(InputError::NonClosing {
                        reason: format!("crossing {x} receives conflicting orientations"),
                    }));
                }
                Some(_) => continue,
                None => {}
            }
            over_dir[x] = Some(dir);
            // propagate through both over labels of x
            for &slot in &[1usize, 3] {
                let label = tuples[x][slot];
                let here_head = head_state(slot, dir);
                for &(y, yslot) in &occ[&label] {
                    if (y, yslot) == (x, slot) {
                        continue;
                    }
                    match yslot {
                        0 | 2 => {
                            let other_head = head_state(yslot, false);
                            if other_head == here_head {
                                return Err(Error::Input(InputError::NonClosing {
                                    reason: format!(
                                        "arc {label} cannot be oriented consistently"
                                    ),
                                }));
                            }
                        }
                        1 | 3 => {
                            let want_head = !here_head;
                            let ydir = match yslot {
                                1 => !want_head,
                                3 => want_head,
                                _ => unreachable!(),
                            };
                            queue.push((y, ydir));
                        }
                        _ => unreachable!(),
                    }
                }
            }
        }
        // components that never pass under leave crossings free; fix one and repeat
        match over_dir.iter().position(|d| d.is_none()) {
            Some(x) => queue.push((x, true)),
            None => break,
        }
    }
    Ok(over_dir.into_iter().map(|d| d.unwrap()).collect())
}
