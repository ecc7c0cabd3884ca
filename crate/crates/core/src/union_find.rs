//! Concurrent union-find over atomic parent pointers.
//!
//! Every link points toward a smaller vertex id: unions hook the larger root
//! under the smaller, and min-hooking only ever lowers a parent. That keeps
//! the forest acyclic without locks or ranks, makes [`UnionFind::find`] a
//! bounded chase that never mutates, and pins each component's final root at
//! its minimum member — which is exactly the label the algorithms report.

use std::sync::atomic::{AtomicU32, Ordering};

pub struct UnionFind {
    parents: Vec<AtomicU32>,
}

impl UnionFind {
    pub fn new(n: u32) -> Self {
        UnionFind {
            parents: (0..n).map(AtomicU32::new).collect(),
        }
    }

    pub fn len(&self) -> u32 {
        self.parents.len() as u32
    }

    pub fn is_empty(&self) -> bool {
        self.parents.is_empty()
    }

    /// Raw parent pointer (not the root).
    #[inline]
    pub fn parent(&self, v: u32) -> u32 {
        self.parents[v as usize].load(Ordering::Acquire)
    }

    /// Root of `v`'s tree. Read-only: safe to race with unions, and always
    /// terminates because ids strictly decrease along links.
    pub fn find(&self, v: u32) -> u32 {
        let mut cur = v;
        loop {
            let p = self.parents[cur as usize].load(Ordering::Acquire);
            if p == cur {
                return cur;
            }
            cur = p;
        }
    }

    /// Merges the sets of `a` and `b` by hooking the larger root under the
    /// smaller. Lock-free: a lost race re-resolves the roots and retries.
    pub fn union_async(&self, a: u32, b: u32) {
        let mut x = a;
        let mut y = b;
        loop {
            x = self.find(x);
            y = self.find(y);
            if x == y {
                return;
            }
            let (lo, hi) = if x < y { (x, y) } else { (y, x) };
            match self.parents[hi as usize].compare_exchange(
                hi,
                lo,
                Ordering::AcqRel,
                Ordering::Acquire,
            ) {
                Ok(_) => return,
                Err(_) => {
                    // `hi` gained a parent meanwhile; chase the new roots.
                    x = lo;
                    y = hi;
                }
            }
        }
    }

    /// Lowers `v`'s parent pointer to at most `w` (the min-hooking sampling
    /// step). Also a valid union: pointing a root at a smaller vertex merges
    /// the two trees.
    #[inline]
    pub fn hook_min(&self, v: u32, w: u32) {
        self.parents[v as usize].fetch_min(w, Ordering::AcqRel);
    }

    /// Full path compression: afterwards every parent is a root. Call at
    /// quiescence (no concurrent unions).
    pub fn compress_all(&self) {
        for v in 0..self.parents.len() as u32 {
            let root = self.find(v);
            self.parents[v as usize].store(root, Ordering::Release);
        }
    }

    /// Component label (root) of every vertex.
    pub fn labels(&self) -> Vec<u32> {
        (0..self.len()).map(|v| self.find(v)).collect()
    }
}
