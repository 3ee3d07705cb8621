//! Bounded single-producer/single-consumer queue with drop-newest overflow.
//!
//! Each participant pipeline owns exactly one of these; the producer side
//! never blocks and never fails — overflow discards the incoming entry and
//! counts it. The two handles may live on different threads (lock-free ring
//! buffer, one atomic cursor per side).

use std::cell::UnsafeCell;
use std::mem::MaybeUninit;
use std::sync::atomic::{AtomicU64, AtomicUsize, Ordering};
use std::sync::Arc;

/// Outcome of an offer: the entry was appended, or discarded because the
/// queue was full. Overflow is a counted outcome, not an error.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Offer {
    Accepted,
    Dropped,
}

impl Offer {
    pub fn is_accepted(&self) -> bool {
        matches!(self, Offer::Accepted)
    }
}

struct Ring<T> {
    buf: Box<[UnsafeCell<MaybeUninit<T>>]>,
    capacity: usize,
    /// Consumer cursor: next index to read. Monotonic, wrapped on access.
    head: AtomicUsize,
    /// Producer cursor: next index to write. Monotonic, wrapped on access.
    tail: AtomicUsize,
    offered: AtomicU64,
    dropped: AtomicU64,
}

unsafe impl<T: Send> Send for Ring<T> {}
unsafe impl<T: Send> Sync for Ring<T> {}

impl<T> Drop for Ring<T> {
    fn drop(&mut self) {
        let head = *self.head.get_mut();
        let tail = *self.tail.get_mut();
        for i in head..tail {
            unsafe { (*self.buf[i % self.capacity].get()).assume_init_drop() };
        }
    }
}

/// Create a bounded queue with the given capacity (> 0).
pub fn capture_queue<T>(capacity: usize) -> (QueueProducer<T>, QueueConsumer<T>) {
    assert!(capacity > 0, "queue capacity must be positive");
    let ring = Arc::new(Ring {
        buf: (0..capacity).map(|_| UnsafeCell::new(MaybeUninit::uninit())).collect(),
        capacity,
        head: AtomicUsize::new(0),
        tail: AtomicUsize::new(0),
        offered: AtomicU64::new(0),
        dropped: AtomicU64::new(0),
    });
    (
        QueueProducer { ring: Arc::clone(&ring), tail: 0, cached_head: 0 },
        QueueConsumer { ring, head: 0, cached_tail: 0 },
    )
}

/// Write side. Exactly one producer exists per queue.
pub struct QueueProducer<T> {
    ring: Arc<Ring<T>>,
    tail: usize,
    cached_head: usize,
}

impl<T> QueueProducer<T> {
    /// Sequence number the next offer will consume. Sequence numbers count
    /// offers (accepted or dropped), so gaps in a drained stream mark where
    /// overflow discarded entries.
    pub fn next_seq(&self) -> u64 {
        self.ring.offered.load(Ordering::Relaxed)
    }

    /// Append the entry if there is room, otherwise discard it and count
    /// the drop. Never blocks.
    pub fn offer(&mut self, value: T) -> Offer {
        self.ring.offered.fetch_add(1, Ordering::Relaxed);
        if self.tail - self.cached_head >= self.ring.capacity {
            self.cached_head = self.ring.head.load(Ordering::Acquire);
            if self.tail - self.cached_head >= self.ring.capacity {
                self.ring.dropped.fetch_add(1, Ordering::Relaxed);
                return Offer::Dropped;
            }
        }
        unsafe { (*self.ring.buf[self.tail % self.ring.capacity].get()).write(value) };
        self.tail += 1;
        self.ring.tail.store(self.tail, Ordering::Release);
        Offer::Accepted
    }

    pub fn offered(&self) -> u64 {
        self.ring.offered.load(Ordering::Relaxed)
    }

    pub fn dropped(&self) -> u64 {
        self.ring.dropped.load(Ordering::Relaxed)
    }

    pub fn accepted(&self) -> u64 {
        self.offered() - self.dropped()
    }
}

/// Read side. Exactly one consumer exists per queue.
pub struct QueueConsumer<T> {
    ring: Arc<Ring<T>>,
    head: usize,
    cached_tail: usize,
}

impl<T> QueueConsumer<T> {
    pub fn pop(&mut self) -> Option<T> {
        if self.cached_tail == self.head {
            self.cached_tail = self.ring.tail.load(Ordering::Acquire);
            if self.cached_tail == self.head {
                return None;
            }
        }
        let value =
            unsafe { (*self.ring.buf[self.head % self.ring.capacity].get()).assume_init_read() };
        self.head += 1;
        self.ring.head.store(self.head, Ordering::Release);
        Some(value)
    }

    /// Remove everything currently visible, in offer order.
    pub fn drain(&mut self) -> Vec<T> {
        let mut out = Vec::new();
        while let Some(v) = self.pop() {
            out.push(v);
        }
        out
    }

    /// Entries visible to the consumer right now.
    pub fn len(&self) -> usize {
        self.ring.tail.load(Ordering::Acquire) - self.head
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn dropped(&self) -> u64 {
        self.ring.dropped.load(Ordering::Relaxed)
    }

    pub fn offered(&self) -> u64 {
        self.ring.offered.load(Ordering::Relaxed)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn overflow_drops_the_new_entry() {
        let (mut tx, mut rx) = capture_queue::<&str>(2);
        assert_eq!(tx.offer("a"), Offer::Accepted);
        assert_eq!(tx.offer("b"), Offer::Accepted);
        assert_eq!(tx.offer("c"), Offer::Dropped);
        assert_eq!(tx.dropped(), 1);
        assert_eq!(rx.drain(), vec!["a", "b"]);
    }

    #[test]
    fn draining_frees_capacity() {
        let (mut tx, mut rx) = capture_queue::<u32>(2);
        assert!(tx.offer(1).is_accepted());
        assert_eq!(rx.drain(), vec![1]);
        assert!(tx.offer(2).is_accepted());
        assert!(tx.offer(3).is_accepted());
        assert_eq!(tx.dropped(), 0);
        assert_eq!(rx.drain(), vec![2, 3]);
    }

    #[test]
    fn sequence_numbers_count_offers_in_order() {
        let (mut tx, _rx) = capture_queue::<u64>(65_536);
        for i in 0..10_000u64 {
            assert_eq!(tx.next_seq(), i);
            assert!(tx.offer(i).is_accepted());
        }
        assert_eq!(tx.offered(), 10_000);
        assert_eq!(tx.dropped(), 0);
        assert_eq!(tx.accepted(), 10_000);
    }

    #[test]
    fn conservation_holds_under_random_interleaving() {
        let (mut tx, mut rx) = capture_queue::<u64>(7);
        let mut accepted = 0u64;
        let mut popped = Vec::new();
        // deterministic pseudo-random interleave
        let mut state = 0x9e3779b97f4a7c15u64;
        for i in 0..10_000u64 {
            state = state.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
            if state % 3 == 0 {
                popped.extend(rx.pop());
            }
            if tx.offer(i).is_accepted() {
                accepted += 1;
            }
        }
        popped.extend(rx.drain());
        assert_eq!(tx.offered(), 10_000);
        assert_eq!(tx.offered(), tx.accepted() + tx.dropped());
        assert_eq!(accepted, tx.accepted());
        assert_eq!(popped.len() as u64, accepted);
        // popped values strictly increase (FIFO, drop-newest never reorders)
        assert!(popped.windows(2).all(|w| w[0] < w[1]));
    }

    #[test]
    fn cross_thread_handoff() {
        let (mut tx, mut rx) = capture_queue::<u64>(128);
        let producer = std::thread::spawn(move || {
            // spin until accepted: every retry is a counted offer
            for i in 0..100_000u64 {
                while !tx.offer(i).is_accepted() {
                    std::hint::spin_loop();
                }
            }
            (tx.offered(), tx.dropped())
        });
        let mut expected = 0u64;
        while expected < 100_000 {
            if let Some(v) = rx.pop() {
                assert_eq!(v, expected);
                expected += 1;
            } else {
                std::hint::spin_loop();
            }
        }
        let (offered, dropped) = producer.join().unwrap();
        assert_eq!(offered - dropped, 100_000);
        assert!(rx.is_empty());
    }

    #[test]
    fn unconsumed_entries_are_dropped_with_the_ring() {
        use std::sync::atomic::AtomicUsize;
        static DROPS: AtomicUsize = AtomicUsize::new(0);
        struct Probe;
        impl Drop for Probe {
            fn drop(&mut self) {
                DROPS.fetch_add(1, Ordering::Relaxed);
            }
        }
        let (mut tx, rx) = capture_queue::<Probe>(8);
        for _ in 0..5 {
            assert!(tx.offer(Probe).is_accepted());
        }
        drop(tx);
        drop(rx);
        assert_eq!(DROPS.load(Ordering::Relaxed), 5);
    }
}
