//! Exact feasibility of small linear systems with strict and non-strict
//! inequalities: Gaussian elimination on the equalities, then
//! Fourier–Motzkin on what remains. A witness is recovered by back
//! substitution through the stored elimination stages.

use crate::error::Result;
use crate::scalar::{Scalar, Sign};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Rel {
    Eq,
    Ge,
    Gt,
}

/// `coeffs · x  rel  rhs`.
#[derive(Clone, Debug)]
pub struct Constraint<S> {
    pub coeffs: Vec<S>,
    pub rel: Rel,
    pub rhs: S,
}

impl<S: Scalar> Constraint<S> {
    pub fn new(coeffs: Vec<S>, rel: Rel, rhs: S) -> Self {
        Constraint { coeffs, rel, rhs }
    }

    fn strict(&self) -> bool {
        self.rel == Rel::Gt
    }

    /// Replaces `x_var` using `pivot`, which has a nonzero `var` coefficient.
    fn eliminate(&self, var: usize, pivot: &Constraint<S>) -> Self {
        let f = self.coeffs[var].clone() / pivot.coeffs[var].clone();
        let coeffs = self
            .coeffs
            .iter()
            .zip(&pivot.coeffs)
            .enumerate()
            .map(|(j, (a, b))| if j == var { S::zero() } else { a.clone() - f.clone() * b.clone() })
            .collect();
        Constraint::new(coeffs, self.rel, self.rhs.clone() - f * pivot.rhs.clone())
    }

    /// A constraint with no variables left: is it satisfied?
    fn trivially_holds(&self) -> Result<bool> {
        let s = (-self.rhs.clone()).sign()?;
        Ok(match self.rel {
            Rel::Eq => s == Sign::Zero,
            Rel::Ge => s != Sign::Negative,
            Rel::Gt => s == Sign::Positive,
        })
    }

    fn is_constant(&self) -> bool {
        self.coeffs.iter().all(|c| c.near_zero())
    }
}

/// Returns a feasible point, or `None` if the system has no solution.
pub fn feasible<S: Scalar>(nvar: usize, constraints: &[Constraint<S>]) -> Result<Option<Vec<S>>> {
    let mut eqs: Vec<Constraint<S>> = constraints.iter().filter(|c| c.rel == Rel::Eq).cloned().collect();
    let mut ineqs: Vec<Constraint<S>> = constraints.iter().filter(|c| c.rel != Rel::Eq).cloned().collect();

    let mut pivots: Vec<(usize, Constraint<S>)> = Vec::new();
    for var in 0..nvar {
        let Some(k) = eqs.iter().position(|e| !e.coeffs[var].near_zero()) else { continue };
        let p = eqs.swap_remove(k);
        eqs = eqs.iter().map(|e| e.eliminate(var, &p)).collect();
        ineqs = ineqs.iter().map(|c| c.eliminate(var, &p)).collect();
        pivots.push((var, p));
    }
    for e in &eqs {
        if !e.trivially_holds()? {
            return Ok(None);
        }
    }

    let mut stages: Vec<Vec<Constraint<S>>> = Vec::with_capacity(nvar + 1);
    let mut cur = ineqs;
    for var in 0..nvar {
        let mut next = Vec::new();
        let (mut pos, mut neg) = (Vec::new(), Vec::new());
        for c in &cur {
            match c.coeffs[var].sign()? {
                Sign::Positive => pos.push(c),
                Sign::Negative => neg.push(c),
                Sign::Zero => next.push(c.clone()),
            }
        }
        for p in &pos {
            for n in &neg {
                let a = -n.coeffs[var].clone();
                let b = p.coeffs[var].clone();
                let coeffs = p
                    .coeffs
                    .iter()
                    .zip(&n.coeffs)
                    .enumerate()
                    .map(|(j, (x, y))| if j == var { S::zero() } else { a.clone() * x.clone() + b.clone() * y.clone() })
                    .collect();
                let rel = if p.strict() || n.strict() { Rel::Gt } else { Rel::Ge };
                next.push(Constraint::new(coeffs, rel, a.clone() * p.rhs.clone() + b * n.rhs.clone()));
            }
        }
        let mut kept = Vec::with_capacity(next.len());
        for c in next {
            if c.is_constant() {
                if !c.trivially_holds()? {
                    return Ok(None);
                }
            } else {
                kept.push(c);
            }
        }
        stages.push(cur);
        cur = kept;
    }
    for c in &cur {
        if !c.trivially_holds()? {
            return Ok(None);
        }
    }

    let mut x = vec![S::zero(); nvar];
    for var in (0..nvar).rev() {
        x[var] = pick(var, &stages[var], &x)?;
    }
    for (var, p) in pivots.iter().rev() {
        let rest = (0..nvar)
            .filter(|j| j != var)
            .fold(S::zero(), |acc, j| acc + p.coeffs[j].clone() * x[j].clone());
        x[*var] = (p.rhs.clone() - rest) / p.coeffs[*var].clone();
    }
    Ok(Some(x))
}

/// A value for `x_var` satisfying every constraint of `stage`, given the
/// already-fixed higher variables.
fn pick<S: Scalar>(var: usize, stage: &[Constraint<S>], x: &[S]) -> Result<S> {
    let mut lo: Option<(S, bool)> = None;
    let mut hi: Option<(S, bool)> = None;
    for c in stage {
        let cv = &c.coeffs[var];
        let s = cv.sign()?;
        if s == Sign::Zero {
            continue;
        }
        let rest = (var + 1..x.len()).fold(S::zero(), |acc, j| acc + c.coeffs[j].clone() * x[j].clone());
        let bound = (c.rhs.clone() - rest) / cv.clone();
        let strict = c.strict();
        if s == Sign::Positive {
            lo = Some(match lo {
                Some((b, st)) => tighter(b, st, bound, strict, Sign::Positive)?,
                None => (bound, strict),
            });
        } else {
            hi = Some(match hi {
                Some((b, st)) => tighter(b, st, bound, strict, Sign::Negative)?,
                None => (bound, strict),
            });
        }
    }
    Ok(match (lo, hi) {
        (Some((l, _)), Some((h, _))) => {
            if (h.clone() - l.clone()).near_zero() {
                l
            } else {
                (l + h).half()
            }
        }
        (Some((l, _)), None) => l + S::one(),
        (None, Some((h, _))) => h - S::one(),
        (None, None) => S::zero(),
    })
}

/// The more restrictive of two bounds; `dir` is Positive for lower bounds.
fn tighter<S: Scalar>(a: S, sa: bool, b: S, sb: bool, dir: Sign) -> Result<(S, bool)> {
    Ok(match (b.clone() - a.clone()).sign()?.times(dir) {
        Sign::Positive => (b, sb),
        Sign::Negative => (a, sa),
        Sign::Zero => (a, sa || sb),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{qi, Q};

    fn c(coeffs: &[i64], rel: Rel, rhs: i64) -> Constraint<Q> {
        Constraint::new(coeffs.iter().map(|&x| qi(x)).collect(), rel, qi(rhs))
    }

    fn holds(cs: &[Constraint<Q>], x: &[Q]) -> bool {
        cs.iter().all(|k| {
            let v = k.coeffs.iter().zip(x).fold(qi(0), |a, (c, x)| a + c * x);
            match k.rel {
                Rel::Eq => v == k.rhs,
                Rel::Ge => v >= k.rhs,
                Rel::Gt => v > k.rhs,
            }
        })
    }

    #[test]
    fn strictness_matters() {
        let touching = [c(&[1], Rel::Ge, 0), c(&[-1], Rel::Ge, 0)];
        let x = feasible(1, &touching).unwrap().unwrap();
        assert!(holds(&touching, &x));
        let open = [c(&[1], Rel::Gt, 0), c(&[-1], Rel::Ge, 0)];
        assert!(feasible(1, &open).unwrap().is_none());
    }

    #[test]
    fn equalities_and_witness() {
        let cs = [
            c(&[1, 1, 0], Rel::Eq, 3),
            c(&[0, 1, -1], Rel::Eq, 1),
            c(&[1, 0, 0], Rel::Gt, 0),
            c(&[0, 0, 1], Rel::Ge, 1),
        ];
        let x = feasible(3, &cs).unwrap().unwrap();
        assert!(holds(&cs, &x), "{x:?}");
        let bad = [c(&[1, 1], Rel::Eq, 1), c(&[2, 2], Rel::Eq, 3)];
        assert!(feasible(2, &bad).unwrap().is_none());
    }

    #[test]
    fn triangle() {
        let cs = [c(&[1, 0], Rel::Gt, 0), c(&[0, 1], Rel::Gt, 0), c(&[-1, -1], Rel::Gt, -1)];
        let x = feasible(2, &cs).unwrap().unwrap();
        assert!(holds(&cs, &x));
        let empty = [c(&[1, 0], Rel::Gt, 0), c(&[0, 1], Rel::Gt, 0), c(&[-1, -1], Rel::Ge, 0)];
        assert!(feasible(2, &empty).unwrap().is_none());
    }
}
