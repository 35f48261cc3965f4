//! The one synchronization point of the multi-worker planners: a
//! replace-if-better cell holding the best solution found by any
//! worker, plus the merged improvement trace.

use super::{Path, TraceEntry};
use std::sync::atomic::{AtomicU64, Ordering};
use std::sync::Mutex;

struct Inner {
    cost: f64,
    path: Option<Path>,
    trace: Vec<TraceEntry>,
}

pub(crate) struct SharedBest {
    /// Bit image of the current cost for lock-free reads. Costs are
    /// non-negative, so the IEEE bit pattern preserves their order.
    cost_bits: AtomicU64,
    inner: Mutex<Inner>,
}

impl SharedBest {
    pub fn new() -> Self {
        SharedBest {
            cost_bits: AtomicU64::new(f64::INFINITY.to_bits()),
            inner: Mutex::new(Inner {
                cost: f64::INFINITY,
                path: None,
                trace: Vec::new(),
            }),
        }
    }

    /// Snapshot of the best published cost; may be momentarily stale,
    /// which only makes pruning conservative.
    pub fn cost(&self) -> f64 {
        f64::from_bits(self.cost_bits.load(Ordering::Relaxed))
    }

    /// Publishes a solution if it beats the current best. The path is
    /// built only on acceptance. Returns whether it was accepted.
    pub fn offer(&self, cost: f64, at: f64, make_path: impl FnOnce() -> Path) -> bool {
        let mut inner = self.inner.lock().expect("shared best cell poisoned");
        if cost >= inner.cost {
            return false;
        }
        inner.cost = cost;
        inner.path = Some(make_path());
        inner.trace.push(TraceEntry { at, cost });
        self.cost_bits.store(cost.to_bits(), Ordering::Relaxed);
        true
    }

    /// Consumes the cell: (best cost, best path, merged trace).
    pub fn into_parts(self) -> (f64, Option<Path>, Vec<TraceEntry>) {
        let inner = self.inner.into_inner().expect("shared best cell poisoned");
        (inner.cost, inner.path, inner.trace)
    }
}
