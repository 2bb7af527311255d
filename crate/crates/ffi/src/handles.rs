use std::collections::HashSet;
use std::sync::Mutex;

/// Addresses of live handles, so stale or foreign pointers are rejected
/// instead of dereferenced.
pub struct Registry(Mutex<Option<HashSet<usize>>>);

impl Registry {
    pub const fn new() -> Self {
        Registry(Mutex::new(None))
    }

    fn with<R>(&self, f: impl FnOnce(&mut HashSet<usize>) -> R) -> R {
        let mut guard = self.0.lock().unwrap_or_else(|e| e.into_inner());
        f(guard.get_or_insert_with(HashSet::new))
    }

    pub fn insert(&self, addr: usize) {
        self.with(|s| s.insert(addr));
    }

    pub fn contains(&self, addr: usize) -> bool {
        self.with(|s| s.contains(&addr))
    }

    pub fn remove(&self, addr: usize) -> bool {
        self.with(|s| s.remove(&addr))
    }
}
