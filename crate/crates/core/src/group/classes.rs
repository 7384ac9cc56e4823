use super::Group;
use crate::bitset::Bitset;

#[derive(Clone, Debug)]
pub struct ConjClass {
    /// Least element index in the class.
    pub representative: usize,
    pub size: usize,
    pub members: Bitset,
}

/// Orbits of the conjugation action, sorted by (size, representative).
pub(super) fn compute(g: &Group) -> (Vec<ConjClass>, Vec<u32>) {
    let n = g.order();
    let gens = g.generator_indices();
    let mut class_of = vec![u32::MAX; n];
    let mut raw: Vec<(usize, Vec<usize>)> = Vec::new();
    for start in 0..n {
        if class_of[start] != u32::MAX {
            continue;
        }
        let id = raw.len() as u32;
        class_of[start] = id;
        let mut orbit = vec![start];
        let mut head = 0;
        while head < orbit.len() {
            let x = orbit[head];
            head += 1;
            for &s in gens {
                let y = g.conj(x, s);
                if class_of[y] == u32::MAX {
                    class_of[y] = id;
                    orbit.push(y);
                }
            }
        }
        raw.push((start, orbit));
    }
    raw.sort_by_key(|(rep, orbit)| (orbit.len(), *rep));
    let mut classes = Vec::with_capacity(raw.len());
    for (ci, (rep, orbit)) in raw.into_iter().enumerate() {
        for &x in &orbit {
            class_of[x] = ci as u32;
        }
        classes.push(ConjClass {
            representative: rep,
            size: orbit.len(),
            members: Bitset::from_indices(n, orbit),
        });
    }
    (classes, class_of)
}
