//! Process-wide cap on the size of intermediate results.
//!
//! Collection and iterated Magnus keys can grow very quickly. Every
//! potentially large computation checks its term count against this cap and
//! fails with [`Error::Budget`] instead of running unbounded.

use std::cell::Cell;
use std::sync::atomic::{AtomicUsize, Ordering};

use crate::error::{Error, Result};

pub const DEFAULT_MAX_TERMS: usize = 2_000_000;

static MAX_TERMS: AtomicUsize = AtomicUsize::new(DEFAULT_MAX_TERMS);

thread_local! {
    static LOCAL_MAX_TERMS: Cell<Option<usize>> = const { Cell::new(None) };
}

/// The cap in force on the current thread.
pub fn max_terms() -> usize {
    LOCAL_MAX_TERMS
        .with(Cell::get)
        .unwrap_or_else(|| MAX_TERMS.load(Ordering::Relaxed))
}

/// Sets the process-wide cap.
pub fn set_max_terms(limit: usize) {
    MAX_TERMS.store(limit.max(1), Ordering::Relaxed);
}

/// Runs `f` with a cap that only applies to the current thread.
pub fn with_max_terms<T>(limit: usize, f: impl FnOnce() -> T) -> T {
    struct Restore(Option<usize>);
    impl Drop for Restore {
        fn drop(&mut self) {
            LOCAL_MAX_TERMS.with(|c| c.set(self.0));
        }
    }
    let _restore = Restore(LOCAL_MAX_TERMS.with(|c| c.replace(Some(limit.max(1)))));
    f()
}

pub(crate) fn check(what: &'static str, count: usize) -> Result<()> {
    let limit = max_terms();
    if count > limit {
        Err(Error::Budget { what, limit })
    } else {
        Ok(())
    }
}

/// Counts work steps against the budget.
pub(crate) struct Meter {
    what: &'static str,
    used: usize,
    limit: usize,
}

impl Meter {
    pub fn new(what: &'static str) -> Self {
        Meter {
            what,
            used: 0,
            limit: max_terms(),
        }
    }

    #[inline]
    pub fn tick(&mut self) -> Result<()> {
        self.used += 1;
        if self.used > self.limit {
            Err(Error::Budget {
                what: self.what,
                limit: self.limit,
            })
        } else {
            Ok(())
        }
    }
}
