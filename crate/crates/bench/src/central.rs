//! The centralized arm's queue: one mutex-guarded bounded queue shared by
//! every producer. This is the architecture the per-participant queues
//! replaced; it exists here so the replacement claim stays measurable.

use std::collections::VecDeque;
use std::sync::atomic::{AtomicU64, Ordering};
use std::sync::Mutex;

use pixellog_core::capture::Offer;

pub struct CentralQueue<T> {
    inner: Mutex<VecDeque<T>>,
    capacity: usize,
    offered: AtomicU64,
    dropped: AtomicU64,
}

impl<T> CentralQueue<T> {
    pub fn new(capacity: usize) -> CentralQueue<T> {
        assert!(capacity > 0);
        CentralQueue {
            inner: Mutex::new(VecDeque::with_capacity(capacity)),
            capacity,
            offered: AtomicU64::new(0),
            dropped: AtomicU64::new(0),
        }
    }

    /// Drop-newest under overflow, same policy as the per-participant
    /// queues; what differs is who contends on the way in.
    pub fn offer(&self, value: T) -> Offer {
        self.offered.fetch_add(1, Ordering::Relaxed);
        let mut q = self.inner.lock().unwrap();
        if q.len() >= self.capacity {
            drop(q);
            self.dropped.fetch_add(1, Ordering::Relaxed);
            return Offer::Dropped;
        }
        q.push_back(value);
        Offer::Accepted
    }

    pub fn pop(&self) -> Option<T> {
        self.inner.lock().unwrap().pop_front()
    }

    pub fn len(&self) -> usize {
        self.inner.lock().unwrap().len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn offered(&self) -> u64 {
        self.offered.load(Ordering::Relaxed)
    }

    pub fn dropped(&self) -> u64 {
        self.dropped.load(Ordering::Relaxed)
    }
}
