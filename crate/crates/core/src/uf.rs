//! Small union-find used by the identification-class and region machinery.

#[derive(Debug, Clone)]
pub struct UnionFind {
    parent: Vec<usize>,
    rank: Vec<u8>,
}

impl UnionFind {
    pub fn new(n: usize) -> Self {
        UnionFind {
            parent: (0..n).collect(),
            rank: vec![0; n],
        }
    }

    pub fn find(&mut self, x: usize) -> usize {
        let mut root = x;
        while self.parent[root] != root {
            root = self.parent[root];
        }
        let mut cur = x;
        while self.parent[cur] != root {
            let next = self.parent[cur];
            self.parent[cur] = root;
            cur = next;
        }
        root
    }

    /// Returns true if the two elements were in different sets.
    pub fn union(&mut self, a: usize, b: usize) -> bool {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra == rb {
            return false;
        }
        match self.rank[ra].cmp(&self.rank[rb]) {
            std::cmp::Ordering::Less => self.parent[ra] = rb,
            std::cmp::Ordering::Greater => self.parent[rb] = ra,
            std::cmp::Ordering::Equal => {
                self.parent[rb] = ra;
                self.rank[ra] += 1;
            }
        }
        true
    }

    pub fn len(&self) -> usize {
        self.parent.len()
    }

    pub fn is_empty(&self) -> bool {
        self.parent.is_empty()
    }

    /// Numbers the classes by first occurrence when scanning elements in
    /// index order; returns (class id per element, class count).
    pub fn number_classes(&mut self) -> (Vec<usize>, usize) {
        let n = self.len();
        let mut ids = vec![usize::MAX; n];
        let mut next = 0;
        for x in 0..n {
            let r = self.find(x);
            if ids[r] == usize::MAX {
                ids[r] = next;
                next += 1;
            }
        }
        let out = (0..n).map(|x| ids[self.parent[x]]).collect();
        (out, next)
    }
}

/// Union-find with a parity bit on each edge: `union(a, b, p)` asserts
/// bit(a) XOR bit(b) = p. Used to solve transverse-orientation constraints.
#[derive(Debug, Clone)]
pub struct ParityUnionFind {
    parent: Vec<usize>,
    /// parity of element relative to its parent
    par: Vec<bool>,
}

impl ParityUnionFind {
    pub fn new(n: usize) -> Self {
        ParityUnionFind {
            parent: (0..n).collect(),
            par: vec![false; n],
        }
    }

    /// Returns (root, parity of x relative to root).
    pub fn find(&mut self, x: usize) -> (usize, bool) {
        if self.parent[x] == x {
            return (x, false);
        }
        let (root, p) = self.find(self.parent[x]);
        self.parent[x] = root;
        self.par[x] ^= p;
        (root, self.par[x])
    }

    /// Asserts bit(a) XOR bit(b) = parity. Returns false on contradiction.
    pub fn union(&mut self, a: usize, b: usize, parity: bool) -> bool {
        let (ra, pa) = self.find(a);
        let (rb, pb) = self.find(b);
        if ra == rb {
            return (pa ^ pb) == parity;
        }
        self.parent[rb] = ra;
        self.par[rb] = pa ^ pb ^ parity;
        true
    }
}
