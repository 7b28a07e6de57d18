//! Certificates attached to `no` answers, and their independent re-checking.

use crate::distance::DependencySet;
use crate::oracle::Oracle;
use crate::point::{embed_point, Assignment, Point};

/// Two points with recorded values `fx != fy`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PointPair {
    pub x: Point,
    pub y: Point,
    pub fx: bool,
    pub fy: bool,
}

/// `f(x) != f(y)` for points differing only in argument `index`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DependencyWitness {
    pub index: usize,
    pub pair: PointPair,
}

/// A non-symmetry pair for the restriction of `f` that fixes `assignment`.
/// The pair lives in the reduced cube over the free arguments.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RestrictedPair {
    pub assignment: Assignment,
    pub pair: PointPair,
}

impl RestrictedPair {
    /// Arity of the function the pair was drawn from.
    pub fn full_arity(&self) -> usize {
        self.assignment.len() + self.pair.x.len()
    }

    /// Free arguments, in original numbering.
    pub fn free_args(&self) -> DependencySet {
        let n = self.full_arity();
        (0..n).filter(|&i| !self.assignment.contains(i)).collect()
    }

    /// The pair lifted to full points of the original function.
    pub fn lifted(&self) -> Option<(Point, Point)> {
        let x = embed_point(&self.pair.x, &self.assignment).ok()?;
        let y = embed_point(&self.pair.y, &self.assignment).ok()?;
        Some((x, y))
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Witness {
    /// Equal-weight points with different values.
    NonSymmetry(PointPair),
    /// Any two points with different values.
    NonConstancy(PointPair),
    ArgDependency(DependencyWitness),
    /// Produced by a single quasi-symmetry basic step.
    RestrictedNonSymmetry(RestrictedPair),
    /// `f` depends on every argument of `J` (one dependency witness each),
    /// yet fixing the other arguments leaves a function of `x_J` that is not
    /// symmetric. Together these rule out quasi-symmetry.
    QuasiAsymmetry {
        dependencies: Vec<DependencyWitness>,
        restricted: RestrictedPair,
    },
}

impl Witness {
    pub fn kind(&self) -> &'static str {
        match self {
            Witness::NonSymmetry(_) => "non-symmetry",
            Witness::NonConstancy(_) => "non-constancy",
            Witness::ArgDependency(_) => "arg-dependency",
            Witness::RestrictedNonSymmetry(_) => "restricted-non-symmetry",
            Witness::QuasiAsymmetry { .. } => "quasi-asymmetry",
        }
    }
}

fn values_differ<O: Oracle + ?Sized>(f: &O, x: &Point, y: &Point) -> bool {
    match (f.query(x), f.query(y)) {
        (Ok(a), Ok(b)) => a != b,
        _ => false,
    }
}

fn pair_shape_ok(p: &PointPair, arity: usize) -> bool {
    p.x.len() == arity && p.y.len() == arity && p.fx != p.fy
}

fn dependency_ok<O: Oracle + ?Sized>(f: &O, w: &DependencyWitness) -> bool {
    let p = &w.pair;
    pair_shape_ok(p, f.arity())
        && matches!(p.x.xor_delta(&p.y), Ok((1, ref d)) if d[0] == w.index)
        && values_differ(f, &p.x, &p.y)
}

fn restricted_ok<O: Oracle + ?Sized>(f: &O, r: &RestrictedPair) -> bool {
    let p = &r.pair;
    if r.full_arity() != f.arity() || !pair_shape_ok(p, p.x.len()) || p.y.len() != p.x.len() {
        return false;
    }
    if p.x.weight() != p.y.weight() || p.x == p.y {
        return false;
    }
    match r.lifted() {
        Some((x, y)) => values_differ(f, &x, &y),
        None => false,
    }
}

/// Re-checks a witness against `f` with fresh queries.
///
/// Structural claims (equal weights, single-bit differences, index sets) are
/// checked first; the recorded values are never trusted. Malformed
/// witnesses yield `false`.
pub fn verify_witness<O: Oracle + ?Sized>(f: &O, w: &Witness) -> bool {
    let n = f.arity();
    match w {
        Witness::NonSymmetry(p) => {
            pair_shape_ok(p, n)
                && p.x.weight() == p.y.weight()
                && p.x != p.y
                && values_differ(f, &p.x, &p.y)
        }
        Witness::NonConstancy(p) => {
            pair_shape_ok(p, n) && p.x != p.y && values_differ(f, &p.x, &p.y)
        }
        Witness::ArgDependency(d) => dependency_ok(f, d),
        Witness::RestrictedNonSymmetry(r) => restricted_ok(f, r),
        Witness::QuasiAsymmetry {
            dependencies,
            restricted,
        } => {
            let found: DependencySet = dependencies.iter().map(|d| d.index).collect();
            found.len() == dependencies.len()
                && found == restricted.free_args()
                && dependencies.iter().all(|d| dependency_ok(f, d))
                && restricted_ok(f, restricted)
        }
    }
}
