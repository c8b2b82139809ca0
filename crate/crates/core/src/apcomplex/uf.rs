//! Union–find with a parity bit per element, used to merge oriented cells.

#[derive(Clone, Debug)]
pub struct ParityUnionFind {
    parent: Vec<usize>,
    parity: Vec<bool>,
    rank: Vec<u8>,
}

impl ParityUnionFind {
    pub fn new(n: usize) -> Self {
        ParityUnionFind { parent: (0..n).collect(), parity: vec![false; n], rank: vec![0; n] }
    }

    /// Root of `x` and the parity of `x` relative to it.
    pub fn find(&mut self, x: usize) -> (usize, bool) {
        let p = self.parent[x];
        if p == x {
            return (x, false);
        }
        let (root, pp) = self.find(p);
        self.parity[x] ^= pp;
        self.parent[x] = root;
        (root, self.parity[x])
    }

    /// Records `x ~ y` with relative parity `odd`. Returns `false` if this
    /// contradicts earlier merges.
    pub fn union(&mut self, x: usize, y: usize, odd: bool) -> bool {
        let (rx, px) = self.find(x);
        let (ry, py) = self.find(y);
        if rx == ry {
            return px ^ py == odd;
        }
        let (lo, hi) = if self.rank[rx] < self.rank[ry] { (rx, ry) } else { (ry, rx) };
        self.parent[lo] = hi;
        self.parity[lo] = px ^ py ^ odd;
        if self.rank[lo] == self.rank[hi] {
            self.rank[hi] += 1;
        }
        true
    }
}
