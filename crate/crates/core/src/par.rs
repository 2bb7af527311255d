//! Shared helpers for the parallel kernels.

use rayon::prelude::*;

/// Below this many scalar updates a kernel runs on the calling thread.
pub(crate) const PAR_MIN_WORK: usize = 1 << 14;

/// Raw pointer wrapper for scatter kernels whose workers write provably
/// disjoint index sets.
#[derive(Clone, Copy)]
pub(crate) struct SendPtr<T>(pub(crate) *mut T);

// SAFETY: !Send for raw pointers is a lint; callers guarantee disjoint writes.
unsafe impl<T: Send> Send for SendPtr<T> {}
// SAFETY: as above.
unsafe impl<T: Send> Sync for SendPtr<T> {}

impl<T> SendPtr<T> {
    pub(crate) fn get(self) -> *mut T {
        self.0
    }
}

/// Splits two equally long planes into consecutive mutable chunks whose
/// lengths are given by `sizes`, and runs `f(chunk_index, re, im)` on each,
/// in parallel when `parallel` is set.
pub(crate) fn for_each_split<T, F>(re: &mut [T], im: &mut [T], sizes: &[usize], parallel: bool, f: F)
where
    T: Send,
    F: Fn(usize, &mut [T], &mut [T]) + Sync + Send,
{
    debug_assert_eq!(re.len(), im.len());
    debug_assert_eq!(sizes.iter().sum::<usize>(), re.len());
    let mut chunks = Vec::with_capacity(sizes.len());
    let (mut re_rest, mut im_rest) = (re, im);
    for &size in sizes {
        let (r, rt) = re_rest.split_at_mut(size);
        let (i, it) = im_rest.split_at_mut(size);
        chunks.push((r, i));
        re_rest = rt;
        im_rest = it;
    }
    if parallel {
        chunks
            .into_par_iter()
            .enumerate()
            .for_each(|(idx, (r, i))| f(idx, r, i));
    } else {
        for (idx, (r, i)) in chunks.into_iter().enumerate() {
            f(idx, r, i);
        }
    }
}
