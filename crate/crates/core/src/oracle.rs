//! Query access to Boolean functions.
//!
//! A [`BooleanFunction`] is a pure evaluator. Testers never call it
//! directly; they go through an [`Oracle`], which counts every query,
//! repeats included.

use std::sync::atomic::{AtomicU64, Ordering};
use std::sync::Arc;

use crate::error::{check_arity, Error, Result};
use crate::point::{Assignment, Point};

/// A deterministic map from `{0,1}^n` to `{0,1}`.
pub trait BooleanFunction: Send + Sync {
    fn arity(&self) -> usize;

    /// Evaluates at `x`. Callers guarantee `x.len() == self.arity()`.
    fn eval(&self, x: &Point) -> bool;
}

impl<T: BooleanFunction + ?Sized> BooleanFunction for &T {
    fn arity(&self) -> usize {
        (**self).arity()
    }
    fn eval(&self, x: &Point) -> bool {
        (**self).eval(x)
    }
}

impl<T: BooleanFunction + ?Sized> BooleanFunction for Box<T> {
    fn arity(&self) -> usize {
        (**self).arity()
    }
    fn eval(&self, x: &Point) -> bool {
        (**self).eval(x)
    }
}

impl<T: BooleanFunction + ?Sized> BooleanFunction for Arc<T> {
    fn arity(&self) -> usize {
        (**self).arity()
    }
    fn eval(&self, x: &Point) -> bool {
        (**self).eval(x)
    }
}

/// Wraps a closure as a [`BooleanFunction`].
pub struct FnFunction<F> {
    arity: usize,
    f: F,
}

impl<F: Fn(&Point) -> bool + Send + Sync> FnFunction<F> {
    pub fn new(arity: usize, f: F) -> Self {
        Self { arity, f }
    }
}

impl<F: Fn(&Point) -> bool + Send + Sync> BooleanFunction for FnFunction<F> {
    fn arity(&self) -> usize {
        self.arity
    }
    fn eval(&self, x: &Point) -> bool {
        (self.f)(x)
    }
}

/// Query interface consumed by the testers.
pub trait Oracle {
    fn arity(&self) -> usize;

    /// Returns `f(x)` and charges one query.
    fn query(&self, x: &Point) -> Result<bool>;

    /// Queries charged so far.
    fn queries(&self) -> u64;
}

impl<O: Oracle + ?Sized> Oracle for &O {
    fn arity(&self) -> usize {
        (**self).arity()
    }
    fn query(&self, x: &Point) -> Result<bool> {
        (**self).query(x)
    }
    fn queries(&self) -> u64 {
        (**self).queries()
    }
}

/// An oracle over a [`BooleanFunction`] with an atomic query counter.
pub struct CountingOracle<F> {
    func: F,
    queries: AtomicU64,
}

impl<F: BooleanFunction> CountingOracle<F> {
    pub fn new(func: F) -> Self {
        Self {
            func,
            queries: AtomicU64::new(0),
        }
    }

    pub fn function(&self) -> &F {
        &self.func
    }

    pub fn into_inner(self) -> F {
        self.func
    }
}

impl<F: BooleanFunction> Oracle for CountingOracle<F> {
    fn arity(&self) -> usize {
        self.func.arity()
    }

    fn query(&self, x: &Point) -> Result<bool> {
        check_arity(self.func.arity(), x.len())?;
        self.queries.fetch_add(1, Ordering::Relaxed);
        Ok(self.func.eval(x))
    }

    fn queries(&self) -> u64 {
        self.queries.load(Ordering::Relaxed)
    }
}

/// The function obtained from `base` by fixing some arguments to constants.
///
/// Queries are forwarded to `base` and charged to its counter. The free
/// arguments keep their relative order: reduced argument `r` is original
/// argument `free[r]`.
pub struct Restriction<'a, O: ?Sized> {
    base: &'a O,
    fixed: Assignment,
    free: Vec<usize>,
    // base-arity point carrying the fixed values, zeros elsewhere
    template: Point,
}

impl<'a, O: Oracle + ?Sized> Restriction<'a, O> {
    pub fn new(base: &'a O, fixed: Assignment) -> Result<Self> {
        let arity = base.arity();
        if let Some(max) = fixed.max_arg() {
            if max >= arity {
                return Err(Error::IndexOutOfRange { index: max, arity });
            }
        }
        let free = (0..arity).filter(|&i| !fixed.contains(i)).collect();
        let mut template = Point::zeros(arity);
        for (i, v) in fixed.iter() {
            template.set(i, v);
        }
        Ok(Self {
            base,
            fixed,
            free,
            template,
        })
    }

    /// Fixes further arguments, given in this restriction's reduced
    /// numbering. The result is a single restriction of the same base.
    pub fn restrict(&self, more: &Assignment) -> Result<Restriction<'a, O>> {
        let mut fixed = self.fixed.clone();
        for (r, v) in more.iter() {
            let orig = self.original_index(r)?;
            fixed.insert(orig, v);
        }
        Restriction::new(self.base, fixed)
    }

    pub fn fixed(&self) -> &Assignment {
        &self.fixed
    }

    /// Original indices of the free arguments, increasing.
    pub fn free_args(&self) -> &[usize] {
        &self.free
    }

    pub fn original_index(&self, reduced: usize) -> Result<usize> {
        self.free
            .get(reduced)
            .copied()
            .ok_or(Error::IndexOutOfRange {
                index: reduced,
                arity: self.free.len(),
            })
    }

    /// Lifts a reduced point to a point of the base function.
    pub fn lift(&self, q: &Point) -> Result<Point> {
        check_arity(self.free.len(), q.len())?;
        let mut x = self.template.clone();
        for (r, &orig) in self.free.iter().enumerate() {
            if q.get(r) {
                x.set(orig, true);
            }
        }
        Ok(x)
    }
}

impl<O: Oracle + ?Sized> Oracle for Restriction<'_, O> {
    fn arity(&self) -> usize {
        self.free.len()
    }

    fn query(&self, q: &Point) -> Result<bool> {
        let x = self.lift(q)?;
        self.base.query(&x)
    }

    fn queries(&self) -> u64 {
        self.base.queries()
    }
}

/// Fixes the arguments in `fixed` (original indices of `base`).
pub fn restrict<O: Oracle + ?Sized>(base: &O, fixed: Assignment) -> Result<Restriction<'_, O>> {
    Restriction::new(base, fixed)
}
