//! Heap buffers with a caller-chosen byte alignment.
//!
//! Diagonal value planes and state vectors are allocated through
//! [`AlignedVec`] so their first element sits on a cache-line (or SIMD
//! register) boundary. The alignment used for new buffers defaults to 64
//! bytes and can be changed process-wide with [`set_default_alignment`].

use std::alloc::{self, Layout};
use std::fmt;
use std::ops::{Deref, DerefMut};
use std::ptr::NonNull;
use std::sync::atomic::{AtomicUsize, Ordering};

use crate::config::DEFAULT_ALIGNMENT;
use crate::scalar::Scalar;

static DEFAULT_ALIGN: AtomicUsize = AtomicUsize::new(DEFAULT_ALIGNMENT);

/// Sets the alignment used by [`AlignedVec::zeroed`] and friends.
///
/// Panics if `align` is not a power of two.
pub fn set_default_alignment(align: usize) {
    assert!(align.is_power_of_two(), "alignment must be a power of two");
    DEFAULT_ALIGN.store(align, Ordering::Relaxed);
}

pub fn default_alignment() -> usize {
    DEFAULT_ALIGN.load(Ordering::Relaxed)
}

/// Fixed-length, zero-initialized, aligned buffer of scalars.
pub struct AlignedVec<T: Scalar> {
    ptr: NonNull<T>,
    len: usize,
    align: usize,
}

// SAFETY: AlignedVec owns its allocation exclusively, like Vec<T>.
unsafe impl<T: Scalar> Send for AlignedVec<T> {}
// SAFETY: shared access only hands out &[T].
unsafe impl<T: Scalar> Sync for AlignedVec<T> {}

impl<T: Scalar> AlignedVec<T> {
    pub fn zeroed(len: usize) -> Self {
        Self::zeroed_with_alignment(len, default_alignment())
    }

    pub fn zeroed_with_alignment(len: usize, align: usize) -> Self {
        assert!(align.is_power_of_two(), "alignment must be a power of two");
        let align = align.max(std::mem::align_of::<T>());
        if len == 0 {
            return AlignedVec {
                ptr: NonNull::dangling(),
                len: 0,
                align,
            };
        }
        let layout = Self::layout(len, align);
        // SAFETY: layout has non-zero size; all-zero bits are a valid f32/f64.
        let raw = unsafe { alloc::alloc_zeroed(layout) } as *mut T;
        let ptr = NonNull::new(raw).unwrap_or_else(|| alloc::handle_alloc_error(layout));
        AlignedVec { ptr, len, align }
    }

    pub fn from_slice(values: &[T]) -> Self {
        let mut out = Self::zeroed(values.len());
        out.copy_from_slice(values);
        out
    }

    pub fn alignment(&self) -> usize {
        self.align
    }

    fn layout(len: usize, align: usize) -> Layout {
        let size = len
            .checked_mul(std::mem::size_of::<T>())
            .expect("allocation size overflow");
        Layout::from_size_align(size, align).expect("invalid layout")
    }
}

impl<T: Scalar> Drop for AlignedVec<T> {
    fn drop(&mut self) {
        if self.len != 0 {
            // SAFETY: allocated in zeroed_with_alignment with this exact layout.
            unsafe { alloc::dealloc(self.ptr.as_ptr() as *mut u8, Self::layout(self.len, self.align)) }
        }
    }
}

impl<T: Scalar> Deref for AlignedVec<T> {
    type Target = [T];

    fn deref(&self) -> &[T] {
        // SAFETY: ptr is valid for len initialized elements (or dangling with len 0).
        unsafe { std::slice::from_raw_parts(self.ptr.as_ptr(), self.len) }
    }
}

impl<T: Scalar> DerefMut for AlignedVec<T> {
    fn deref_mut(&mut self) -> &mut [T] {
        // SAFETY: as above, and &mut self guarantees exclusivity.
        unsafe { std::slice::from_raw_parts_mut(self.ptr.as_ptr(), self.len) }
    }
}

impl<T: Scalar> Clone for AlignedVec<T> {
    fn clone(&self) -> Self {
        let mut out = Self::zeroed_with_alignment(self.len, self.align);
        out.copy_from_slice(self);
        out
    }
}

impl<T: Scalar> PartialEq for AlignedVec<T> {
    fn eq(&self, other: &Self) -> bool {
        **self == **other
    }
}

impl<T: Scalar> fmt::Debug for AlignedVec<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_list().entries(self.iter()).finish()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn buffers_are_aligned_and_zeroed() {
        for align in [8, 64, 256] {
            let v = AlignedVec::<f64>::zeroed_with_alignment(37, align);
            assert_eq!(v.as_ptr() as usize % align, 0);
            assert!(v.iter().all(|&x| x == 0.0));
            assert_eq!(v.clone().as_ptr() as usize % align, 0);
        }
    }

    #[test]
    fn small_alignment_is_raised_to_natural() {
        let v = AlignedVec::<f64>::zeroed_with_alignment(4, 1);
        assert_eq!(v.alignment(), 8);
    }

    #[test]
    fn empty_buffer() {
        let v = AlignedVec::<f32>::zeroed(0);
        assert!(v.is_empty());
        assert_eq!(v, v.clone());
    }
}
