//! Towers of algebraic extensions over Q(i), with dynamic evaluation.
//!
//! A tower is an ordered list of generators, each defined by a monic
//! squarefree polynomial over the field generated by the previous ones.
//! Defining polynomials are not factored at adjunction time; when a zero
//! test meets a zero divisor the tower splits into refinements (D5 style)
//! and the caller re-runs the enclosing computation on each branch.

use crate::error::{Error, Result};
use crate::gaussian::{rat_i64, GaussianRational, Rat};
use num_traits::{One, Zero};
use std::fmt;
use std::sync::Arc;

/// Canonical reduced representation of a tower element: a polynomial in the
/// generators, level-tagged so nesting is unambiguous.  `Ext` coefficients
/// live strictly below `level`; the vector has length >= 2 and a trailing
/// coefficient that is not structurally zero.
#[derive(Clone, PartialEq, Eq, Debug)]
pub enum Rep {
    Base(GaussianRational),
    Ext { level: usize, coeffs: Vec<Rep> },
}

impl Rep {
    pub fn zero() -> Rep {
        Rep::Base(GaussianRational::zero())
    }

    pub fn one() -> Rep {
        Rep::Base(GaussianRational::one())
    }

    pub fn from_i64(n: i64) -> Rep {
        Rep::Base(GaussianRational::from_i64(n))
    }

    pub fn from_rat(r: Rat) -> Rep {
        Rep::Base(GaussianRational::from_rat(r))
    }

    pub fn from_gaussian(g: GaussianRational) -> Rep {
        Rep::Base(g)
    }

    /// Highest generator index used (0 for constants).
    pub fn top_level(&self) -> usize {
        match self {
            Rep::Base(_) => 0,
            Rep::Ext { level, .. } => *level,
        }
    }

    /// Structural zero test: zero in every branch, no tower needed.
    pub fn is_structural_zero(&self) -> bool {
        match self {
            Rep::Base(c) => c.is_zero(),
            Rep::Ext { coeffs, .. } => coeffs.iter().all(|c| c.is_structural_zero()),
        }
    }

    pub fn as_base(&self) -> Option<&GaussianRational> {
        match self {
            Rep::Base(c) => Some(c),
            Rep::Ext { .. } => None,
        }
    }
}

fn normalize_vec(level: usize, mut v: Vec<Rep>) -> Rep {
    while v.len() > 1 && v.last().map_or(false, |c| c.is_structural_zero()) {
        v.pop();
    }
    if v.is_empty() {
        Rep::zero()
    } else if v.len() == 1 {
        v.pop().unwrap()
    } else {
        Rep::Ext { level, coeffs: v }
    }
}

/// One tower level: a named generator and its monic defining polynomial
/// (dense, ascending, coefficients at lower levels, leading 1 included).
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Level {
    pub name: String,
    pub minpoly: Vec<Rep>,
}

impl Level {
    pub fn degree(&self) -> usize {
        self.minpoly.len() - 1
    }
}

/// An extension tower over Q(i).  Immutable: adjunction returns a new tower.
#[derive(Clone, PartialEq, Eq, Debug, Default)]
pub struct Tower {
    pub levels: Vec<Level>,
}

impl Tower {
    pub fn base() -> Arc<Tower> {
        Arc::new(Tower { levels: Vec::new() })
    }

    pub fn depth(&self) -> usize {
        self.levels.len()
    }

    /// True when `self` extends `other` by appending levels.
    pub fn extends(&self, other: &Tower) -> bool {
        self.levels.len() >= other.levels.len()
            && self.levels[..other.levels.len()] == other.levels[..]
    }

    fn to_vec_at(level: usize, a: &Rep) -> Vec<Rep> {
        match a {
            Rep::Ext { level: l, coeffs } if *l == level => coeffs.clone(),
            _ => vec![a.clone()],
        }
    }

    pub fn add(&self, a: &Rep, b: &Rep) -> Rep {
        let level = a.top_level().max(b.top_level());
        if level == 0 {
            return match (a, b) {
                (Rep::Base(x), Rep::Base(y)) => Rep::Base(x + y),
                _ => unreachable!(),
            };
        }
        let va = Tower::to_vec_at(level, a);
        let vb = Tower::to_vec_at(level, b);
        let n = va.len().max(vb.len());
        let mut out = Vec::with_capacity(n);
        for k in 0..n {
            let x = va.get(k).cloned().unwrap_or_else(Rep::zero);
            let y = vb.get(k).cloned().unwrap_or_else(Rep::zero);
            out.push(self.add(&x, &y));
        }
        normalize_vec(level, out)
    }

    pub fn neg(&self, a: &Rep) -> Rep {
        match a {
            Rep::Base(c) => Rep::Base(-c.clone()),
            Rep::Ext { level, coeffs } => Rep::Ext {
                level: *level,
                coeffs: coeffs.iter().map(|c| self.neg(c)).collect(),
            },
        }
    }

    pub fn sub(&self, a: &Rep, b: &Rep) -> Rep {
        self.add(a, &self.neg(b))
    }

    pub fn mul(&self, a: &Rep, b: &Rep) -> Rep {
        let level = a.top_level().max(b.top_level());
        if level == 0 {
            return match (a, b) {
                (Rep::Base(x), Rep::Base(y)) => Rep::Base(x * y),
                _ => unreachable!(),
            };
        }
        if a.is_structural_zero() || b.is_structural_zero() {
            return Rep::zero();
        }
        let va = Tower::to_vec_at(level, a);
        let vb = Tower::to_vec_at(level, b);
        let mut out = vec![Rep::zero(); va.len() + vb.len() - 1];
        for (i, x) in va.iter().enumerate() {
            if x.is_structural_zero() {
                continue;
            }
            for (j, y) in vb.iter().enumerate() {
                if y.is_structural_zero() {
                    continue;
                }
                let p = self.mul(x, y);
                out[i + j] = self.add(&out[i + j], &p);
            }
        }
        self.reduce_vec(level, out)
    }

    pub fn scale_rat(&self, a: &Rep, r: &Rat) -> Rep {
        self.mul(a, &Rep::from_rat(r.clone()))
    }

    /// Reduce a polynomial in generator `level` modulo its defining polynomial.
    fn reduce_vec(&self, level: usize, mut v: Vec<Rep>) -> Rep {
        let minpoly = &self.levels[level - 1].minpoly;
        let d = minpoly.len() - 1;
        while v.len() > d {
            let lead = v.pop().unwrap();
            if lead.is_structural_zero() {
                continue;
            }
            // x^(d+k) = -(minpoly - x^d) * x^k
            let k = v.len() - d;
            for (i, m) in minpoly.iter().take(d).enumerate() {
                if m.is_structural_zero() {
                    continue;
                }
                let t = self.mul(&lead, m);
                v[k + i] = self.sub(&v[k + i], &t);
            }
        }
        normalize_vec(level, v)
    }

    /// Exact zero test.  May return `TowerSplit` when the answer depends on
    /// the branch of a reducible defining polynomial.
    pub fn is_zero(self: &Arc<Tower>, a: &Rep) -> Result<bool> {
        match a {
            Rep::Base(c) => Ok(c.is_zero()),
            Rep::Ext { level, coeffs } => {
                let mut clean = Vec::with_capacity(coeffs.len());
                let mut all_zero = true;
                for c in coeffs {
                    if self.is_zero(c)? {
                        clean.push(Rep::zero());
                    } else {
                        clean.push(c.clone());
                        all_zero = false;
                    }
                }
                if all_zero {
                    return Ok(true);
                }
                let a = normalize_vec(*level, clean);
                match &a {
                    Rep::Base(c) => Ok(c.is_zero()),
                    Rep::Ext { level, coeffs } if a.top_level() < *level => {
                        let _ = coeffs;
                        self.is_zero(&a)
                    }
                    Rep::Ext { level, coeffs } => {
                        let g = self.poly_gcd(*level - 1, coeffs, &self.levels[*level - 1].minpoly)?;
                        if g.len() <= 1 {
                            return Ok(false);
                        }
                        // a vanishes on the branches of g, not on the cofactor.
                        let (q, _r) = self.poly_divmod(*level - 1, &self.levels[*level - 1].minpoly, &g)?;
                        let t1 = self.refine(*level - 1, g)?;
                        let t2 = self.refine(*level - 1, q)?;
                        Err(Error::TowerSplit(vec![t1, t2]))
                    }
                }
            }
        }
    }

    /// Replace the defining polynomial at `idx` (0-based) by a monic factor
    /// and renormalise the levels above it.
    fn refine(self: &Arc<Tower>, idx: usize, factor: Vec<Rep>) -> Result<Arc<Tower>> {
        let mut levels = self.levels[..idx].to_vec();
        let prefix = Arc::new(Tower { levels: levels.clone() });
        let factor = prefix.poly_monic(idx, &factor)?;
        levels.push(Level { name: self.levels[idx].name.clone(), minpoly: factor });
        let mut t = Arc::new(Tower { levels });
        for lv in &self.levels[idx + 1..] {
            let mig: Vec<Rep> = lv.minpoly.iter().map(|c| t.migrate(c)).collect();
            let lvl = t.depth() + 1;
            let mig = t.poly_squarefree_part(lvl - 1, &mig)?;
            let mut levels = t.levels.clone();
            levels.push(Level { name: lv.name.clone(), minpoly: mig });
            t = Arc::new(Tower { levels });
        }
        Ok(t)
    }

    /// Re-reduce a representation from a compatible (coarser) tower.
    pub fn migrate(self: &Arc<Tower>, a: &Rep) -> Rep {
        match a {
            Rep::Base(_) => a.clone(),
            Rep::Ext { level, coeffs } => {
                let v: Vec<Rep> = coeffs.iter().map(|c| self.migrate(c)).collect();
                self.reduce_vec(*level, v)
            }
        }
    }

    pub fn inv(self: &Arc<Tower>, a: &Rep) -> Result<Rep> {
        match a {
            Rep::Base(c) => Ok(Rep::Base(c.inv()?)),
            Rep::Ext { level, coeffs } => {
                let level = *level;
                // Extended Euclid against the defining polynomial.
                let minpoly = &self.levels[level - 1].minpoly;
                let (g, s) = self.poly_half_ext_gcd(level - 1, coeffs, minpoly)?;
                if g.len() == 1 {
                    let ginv = self.inv(&g[0])?;
                    let v: Vec<Rep> = s.iter().map(|c| self.mul(c, &ginv)).collect();
                    return Ok(self.reduce_vec(level, v));
                }
                if self.is_zero(a)? {
                    return Err(Error::DivisionByZero);
                }
                // Nontrivial gcd: a is a zero divisor, split.
                let (q, _r) = self.poly_divmod(level - 1, minpoly, &g)?;
                let t1 = self.refine(level - 1, g)?;
                let t2 = self.refine(level - 1, q)?;
                Err(Error::TowerSplit(vec![t1, t2]))
            }
        }
    }

    pub fn div(self: &Arc<Tower>, a: &Rep, b: &Rep) -> Result<Rep> {
        let binv = self.inv(b)?;
        Ok(self.mul(a, &binv))
    }

    pub fn pow(&self, a: &Rep, mut n: u64) -> Rep {
        let mut base = a.clone();
        let mut acc = Rep::one();
        while n > 0 {
            if n & 1 == 1 {
                acc = self.mul(&acc, &base);
            }
            n >>= 1;
            if n > 0 {
                base = self.mul(&base, &base);
            }
        }
        acc
    }

    // ---- dense univariate polynomials over the level-`lv` field ----
    // Coefficient reps use generators <= lv; vectors are ascending.

    pub fn poly_trim(self: &Arc<Tower>, mut p: Vec<Rep>) -> Result<Vec<Rep>> {
        while let Some(last) = p.last() {
            if self.is_zero(last)? {
                p.pop();
            } else {
                break;
            }
        }
        Ok(p)
    }

    fn poly_mul_at(&self, _lv: usize, a: &[Rep], b: &[Rep]) -> Vec<Rep> {
        if a.is_empty() || b.is_empty() {
            return Vec::new();
        }
        let mut out = vec![Rep::zero(); a.len() + b.len() - 1];
        for (i, x) in a.iter().enumerate() {
            for (j, y) in b.iter().enumerate() {
                let p = self.mul(x, y);
                out[i + j] = self.add(&out[i + j], &p);
            }
        }
        out
    }

    /// Division with remainder; the divisor's leading coefficient must be a
    /// unit (splits propagate from the inversion).
    pub fn poly_divmod(self: &Arc<Tower>, lv: usize, num: &[Rep], den: &[Rep]) -> Result<(Vec<Rep>, Vec<Rep>)> {
        let den = self.poly_trim(den.to_vec())?;
        if den.is_empty() {
            return Err(Error::DivisionByZero);
        }
        let mut rem = self.poly_trim(num.to_vec())?;
        let dlead = self.inv(den.last().unwrap())?;
        let dd = den.len() - 1;
        if rem.len() < den.len() {
            return Ok((Vec::new(), rem));
        }
        let mut quo = vec![Rep::zero(); rem.len() - dd];
        while rem.len() > dd {
            let k = rem.len() - 1 - dd;
            let c = self.mul(rem.last().unwrap(), &dlead);
            if !c.is_structural_zero() {
                for (i, d) in den.iter().enumerate() {
                    let t = self.mul(&c, d);
                    rem[k + i] = self.sub(&rem[k + i], &t);
                }
            }
            quo[k] = c;
            rem.pop();
            rem = self.poly_trim(rem)?;
            if rem.len() <= dd {
                break;
            }
        }
        let _ = lv;
        Ok((quo, rem))
    }

    pub fn poly_monic(self: &Arc<Tower>, lv: usize, p: &[Rep]) -> Result<Vec<Rep>> {
        let p = self.poly_trim(p.to_vec())?;
        if p.is_empty() {
            return Ok(p);
        }
        let linv = self.inv(p.last().unwrap())?;
        let _ = lv;
        Ok(p.iter().map(|c| self.mul(c, &linv)).collect())
    }

    /// Monic gcd by the Euclidean algorithm over the tower field.
    pub fn poly_gcd(self: &Arc<Tower>, lv: usize, a: &[Rep], b: &[Rep]) -> Result<Vec<Rep>> {
        let mut a = self.poly_trim(a.to_vec())?;
        let mut b = self.poly_trim(b.to_vec())?;
        while !b.is_empty() {
            let (_q, r) = self.poly_divmod(lv, &a, &b)?;
            a = b;
            b = r;
        }
        if a.is_empty() {
            Ok(a)
        } else {
            self.poly_monic(lv, &a)
        }
    }

    /// Half extended gcd: returns (g, s) with s*a = g mod b.
    fn poly_half_ext_gcd(self: &Arc<Tower>, lv: usize, a: &[Rep], b: &[Rep]) -> Result<(Vec<Rep>, Vec<Rep>)> {
        let mut r0 = self.poly_trim(a.to_vec())?;
        let mut r1 = self.poly_trim(b.to_vec())?;
        let mut s0 = vec![Rep::one()];
        let mut s1: Vec<Rep> = Vec::new();
        while !r1.is_empty() {
            let (q, r) = self.poly_divmod(lv, &r0, &r1)?;
            let qs1 = self.poly_mul_at(lv, &q, &s1);
            let mut s2 = Vec::with_capacity(s0.len().max(qs1.len()));
            for k in 0..s0.len().max(qs1.len()) {
                let x = s0.get(k).cloned().unwrap_or_else(Rep::zero);
                let y = qs1.get(k).cloned().unwrap_or_else(Rep::zero);
                s2.push(self.sub(&x, &y));
            }
            r0 = r1;
            r1 = r;
            s0 = s1;
            s1 = self.poly_trim(s2)?;
        }
        if r0.is_empty() {
            return Ok((r0, s0));
        }
        let linv = self.inv(r0.last().unwrap())?;
        let g = r0.iter().map(|c| self.mul(c, &linv)).collect();
        let s = s0.iter().map(|c| self.mul(c, &linv)).collect();
        Ok((g, s))
    }

    pub fn poly_derivative(&self, p: &[Rep]) -> Vec<Rep> {
        p.iter()
            .enumerate()
            .skip(1)
            .map(|(i, c)| self.scale_rat(c, &rat_i64(i as i64)))
            .collect()
    }

    /// p / gcd(p, p'), made monic.
    pub fn poly_squarefree_part(self: &Arc<Tower>, lv: usize, p: &[Rep]) -> Result<Vec<Rep>> {
        let p = self.poly_trim(p.to_vec())?;
        if p.len() <= 1 {
            return Err(Error::InvalidInput("squarefree part of a constant".into()));
        }
        let dp = self.poly_derivative(&p);
        let g = self.poly_gcd(lv, &p, &dp)?;
        if g.len() <= 1 {
            return self.poly_monic(lv, &p);
        }
        let (q, _r) = self.poly_divmod(lv, &p, &g)?;
        self.poly_monic(lv, &q)
    }

    /// Evaluate a polynomial at a tower element.
    pub fn poly_eval(&self, p: &[Rep], x: &Rep) -> Rep {
        let mut acc = Rep::zero();
        for c in p.iter().rev() {
            acc = self.mul(&acc, x);
            acc = self.add(&acc, c);
        }
        acc
    }
}

// ---- adjunction ----

/// Outcome of adjoining a root: the (possibly unchanged) tower and a handle.
pub struct Adjoined {
    pub tower: Arc<Tower>,
    pub root: Rep,
}

impl Tower {
    fn generator(&self, idx: usize) -> Rep {
        Rep::Ext { level: idx + 1, coeffs: vec![Rep::zero(), Rep::one()] }
    }

    /// Look for an existing level with this exact defining polynomial.
    fn find_level(self: &Arc<Tower>, p: &[Rep]) -> Result<Option<Rep>> {
        'levels: for (idx, lv) in self.levels.iter().enumerate() {
            if lv.minpoly.len() != p.len() {
                continue;
            }
            for (a, b) in lv.minpoly.iter().zip(p.iter()) {
                if !self.is_zero(&self.sub(a, b))? {
                    continue 'levels;
                }
            }
            return Ok(Some(self.generator(idx)));
        }
        Ok(None)
    }

    /// Adjoin a root of the squarefree part of `p`.  Linear and in-field
    /// quadratic cases return an existing element without growing the tower.
    pub fn adjoin_root(self: &Arc<Tower>, p: &[Rep]) -> Result<Adjoined> {
        let p = self.poly_trim(p.to_vec())?;
        if p.len() <= 1 {
            return Err(Error::InvalidInput("adjoin_root needs a nonconstant polynomial".into()));
        }
        let lv = self.depth();
        let sf = self.poly_squarefree_part(lv, &p)?;
        if sf.len() == 2 {
            let root = self.neg(&self.div(&sf[0], &sf[1])?);
            return Ok(Adjoined { tower: self.clone(), root });
        }
        if sf.len() == 3 {
            if let (Some(c0), Some(c1)) = (sf[0].as_base(), sf[1].as_base()) {
                // monic quadratic over Q(i): try the discriminant in-field
                let four = GaussianRational::from_i64(4);
                let disc = &(c1 * c1) - &(&four * c0);
                if let Some(s) = disc.sqrt() {
                    let half = GaussianRational::from_rat(crate::gaussian::rat(1, 2));
                    let diff = &s - c1;
                    let root = &diff * &half;
                    return Ok(Adjoined { tower: self.clone(), root: Rep::Base(root) });
                }
            }
        }
        if let Some(root) = self.find_level(&sf)? {
            return Ok(Adjoined { tower: self.clone(), root });
        }
        let name = format!("t{}", self.depth() + 1);
        let mut levels = self.levels.clone();
        levels.push(Level { name, minpoly: sf });
        let tower = Arc::new(Tower { levels });
        let root = tower.generator(tower.depth() - 1);
        Ok(Adjoined { tower, root })
    }

    /// A primitive N-th root of unity.
    pub fn adjoin_root_of_unity(self: &Arc<Tower>, n: u32) -> Result<Adjoined> {
        match n {
            0 => Err(Error::InvalidInput("root of unity order must be positive".into())),
            1 => Ok(Adjoined { tower: self.clone(), root: Rep::one() }),
            2 => Ok(Adjoined { tower: self.clone(), root: Rep::from_i64(-1) }),
            4 => Ok(Adjoined { tower: self.clone(), root: Rep::from_gaussian(GaussianRational::i()) }),
            _ if n % 2 == 0 && (n / 2) % 2 == 1 => {
                // zeta_{2m} = -zeta_m^{(m+1)/2} for odd m
                let m = n / 2;
                let adj = self.adjoin_root_of_unity(m)?;
                let k = u64::from((m + 1) / 2);
                let root = adj.tower.neg(&adj.tower.pow(&adj.root, k));
                Ok(Adjoined { tower: adj.tower, root })
            }
            _ => {
                let phi: Vec<Rep> = cyclotomic(n).into_iter().map(Rep::from_rat).collect();
                self.adjoin_root(&phi)
            }
        }
    }
}

/// Coefficients of the N-th cyclotomic polynomial, ascending.
fn cyclotomic(n: u32) -> Vec<Rat> {
    // x^n - 1 divided by the product of cyclotomics of proper divisors
    fn poly_div(num: &[Rat], den: &[Rat]) -> Vec<Rat> {
        let mut rem = num.to_vec();
        let mut quo = vec![Rat::zero(); rem.len() - den.len() + 1];
        for k in (0..quo.len()).rev() {
            let c = rem[k + den.len() - 1].clone() / den.last().unwrap().clone();
            quo[k] = c.clone();
            if !c.is_zero() {
                for (i, d) in den.iter().enumerate() {
                    let t = &c * d;
                    rem[k + i] -= t;
                }
            }
        }
        quo
    }
    let mut num = vec![Rat::zero(); (n + 1) as usize];
    num[0] = -Rat::one();
    num[n as usize] = Rat::one();
    let mut den = vec![Rat::one()];
    for d in 1..n {
        if n % d == 0 {
            let phi_d = cyclotomic(d);
            let mut next = vec![Rat::zero(); den.len() + phi_d.len() - 1];
            for (i, a) in den.iter().enumerate() {
                for (j, b) in phi_d.iter().enumerate() {
                    next[i + j] += a * b;
                }
            }
            den = next;
        }
    }
    poly_div(&num, &den)
}

// ---- root listing over a tower ----

/// All roots of `p` with multiplicities, extending the tower as necessary.
/// Deterministic: Yun layers in increasing multiplicity, in-field roots
/// before fresh adjunctions.
pub fn all_roots(tower: &Arc<Tower>, p: &[Rep]) -> Result<(Arc<Tower>, Vec<(Rep, u32)>)> {
    let mut t = tower.clone();
    let lv = t.depth();
    let p = t.poly_trim(p.to_vec())?;
    if p.len() <= 1 {
        return Ok((t, Vec::new()));
    }
    // Yun squarefree decomposition (characteristic zero).
    let dp = t.poly_derivative(&p);
    let mut layers: Vec<(Vec<Rep>, u32)> = Vec::new();
    let g = t.poly_gcd(lv, &p, &dp)?;
    if g.len() <= 1 {
        layers.push((p.clone(), 1));
    } else {
        let (mut c, _) = t.poly_divmod(lv, &p, &g)?;
        let (mut d, _) = {
            let (dpg, _) = t.poly_divmod(lv, &dp, &g)?;
            let cp = t.poly_derivative(&c);
            let mut diff = Vec::with_capacity(dpg.len().max(cp.len()));
            for k in 0..dpg.len().max(cp.len()) {
                let x = dpg.get(k).cloned().unwrap_or_else(Rep::zero);
                let y = cp.get(k).cloned().unwrap_or_else(Rep::zero);
                diff.push(t.sub(&x, &y));
            }
            (t.poly_trim(diff)?, ())
        };
        let mut mult = 1u32;
        while c.len() > 1 {
            let a = t.poly_gcd(lv, &c, &d)?;
            if a.len() > 1 {
                layers.push((a.clone(), mult));
            }
            let (c2, _) = t.poly_divmod(lv, &c, &a)?;
            let (dd, _) = t.poly_divmod(lv, &d, &a)?;
            let c2p = t.poly_derivative(&c2);
            let mut diff = Vec::with_capacity(dd.len().max(c2p.len()));
            for k in 0..dd.len().max(c2p.len()) {
                let x = dd.get(k).cloned().unwrap_or_else(Rep::zero);
                let y = c2p.get(k).cloned().unwrap_or_else(Rep::zero);
                diff.push(t.sub(&x, &y));
            }
            c = c2;
            d = t.poly_trim(diff)?;
            mult += 1;
        }
    }
    let mut out: Vec<(Rep, u32)> = Vec::new();
    for (factor, mult) in layers {
        let mut g = factor;
        // peel off rational roots first to keep adjunctions irreducible
        for r in rational_roots(&t, &g) {
            let lin = vec![t.neg(&r), Rep::one()];
            let (q, _) = t.poly_divmod(t.depth(), &g, &lin)?;
            out.push((r, mult));
            g = t.poly_trim(q)?;
        }
        while g.len() > 1 {
            if g.len() == 2 {
                let r = t.neg(&t.div(&g[0], &g[1])?);
                out.push((r, mult));
                break;
            }
            let adj = t.adjoin_root(&g)?;
            t = adj.tower;
            let root = adj.root;
            let g_mig: Vec<Rep> = g.to_vec();
            let lin = vec![t.neg(&root), Rep::one()];
            let (q, r) = t.poly_divmod(t.depth(), &g_mig, &lin)?;
            debug_assert!(r.iter().all(|c| c.is_structural_zero()) || r.is_empty());
            out.push((root, mult));
            g = t.poly_trim(q)?;
        }
    }
    Ok((t, out))
}

/// Rational roots of a squarefree polynomial with real rational Base
/// coefficients, by the rational root theorem.  Returns an empty list when
/// the coefficients are not of that shape (adjunction handles those).
fn rational_roots(t: &Arc<Tower>, g: &[Rep]) -> Vec<Rep> {
    use num_bigint::BigInt;
    let mut int_coeffs: Vec<BigInt> = Vec::with_capacity(g.len());
    let mut denom_lcm: BigInt = 1.into();
    for c in g {
        match c {
            Rep::Base(v) if v.im.is_zero() => {
                denom_lcm = num_integer::lcm(denom_lcm, v.re.denom().clone());
            }
            _ => return Vec::new(),
        }
    }
    for c in g {
        if let Rep::Base(v) = c {
            int_coeffs.push((&v.re * Rat::from_integer(denom_lcm.clone())).to_integer());
        }
    }
    // strip integer content
    let mut content: BigInt = 0.into();
    for c in &int_coeffs {
        content = num_integer::gcd(content, c.clone());
    }
    if content > 1.into() {
        for c in int_coeffs.iter_mut() {
            *c /= &content;
        }
    }
    let small_divisors = |n: &BigInt| -> Option<Vec<BigInt>> {
        let mut n = if n < &BigInt::from(0) { -n.clone() } else { n.clone() };
        if n.is_zero() {
            return None;
        }
        let mut primes: Vec<(BigInt, u32)> = Vec::new();
        let mut d: BigInt = 2.into();
        while &d * &d <= n {
            if (&n % &d).is_zero() {
                let mut e = 0;
                while (&n % &d).is_zero() {
                    n /= &d;
                    e += 1;
                }
                primes.push((d.clone(), e));
            }
            d += 1;
            if d > BigInt::from(1_000_000) {
                return None; // give up; adjunction will cope
            }
        }
        if n > 1.into() {
            primes.push((n, 1));
        }
        let mut divs: Vec<BigInt> = vec![1.into()];
        for (p, e) in primes {
            let mut next = Vec::new();
            for dv in &divs {
                let mut pk: BigInt = 1.into();
                for _ in 0..=e {
                    next.push(dv * &pk);
                    pk *= &p;
                }
            }
            divs = next;
            if divs.len() > 4096 {
                return None;
            }
        }
        Some(divs)
    };
    let mut poly = int_coeffs;
    let mut roots = Vec::new();
    'outer: loop {
        while poly.last().map_or(false, |c| c.is_zero()) {
            poly.pop();
        }
        if poly.len() <= 1 {
            break;
        }
        if poly[0].is_zero() {
            roots.push(Rep::zero());
            poly.remove(0);
            continue;
        }
        let (p_divs, q_divs) = match (small_divisors(&poly[0]), small_divisors(poly.last().unwrap())) {
            (Some(a), Some(b)) => (a, b),
            _ => break,
        };
        for p in &p_divs {
            for q in &q_divs {
                for sign in [1i64, -1] {
                    let cand = Rat::new(p * BigInt::from(sign), q.clone());
                    // synthetic evaluation
                    let mut acc = Rat::zero();
                    for c in poly.iter().rev() {
                        acc = acc * &cand + Rat::from_integer(c.clone());
                    }
                    if acc.is_zero() {
                        roots.push(Rep::from_rat(cand.clone()));
                        // deflate: poly / (y - cand) exactly
                        let mut quot: Vec<Rat> = vec![Rat::zero(); poly.len() - 1];
                        let mut carry = Rat::zero();
                        for k in (0..poly.len() - 1).rev() {
                            carry = Rat::from_integer(poly[k + 1].clone()) + &carry * &cand;
                            quot[k] = carry.clone();
                        }
                        let mut denoms: BigInt = 1.into();
                        for c in &quot {
                            denoms = num_integer::lcm(denoms, c.denom().clone());
                        }
                        poly = quot
                            .iter()
                            .map(|c| (c * Rat::from_integer(denoms.clone())).to_integer())
                            .collect();
                        continue 'outer;
                    }
                }
            }
        }
        break;
    }
    let _ = t;
    roots
}

// ---- display and numeric approximation ----

pub fn rep_to_string(t: &Tower, a: &Rep) -> String {
    match a {
        Rep::Base(c) => format!("{}", c),
        Rep::Ext { level, coeffs } => {
            let name = &t.levels[*level - 1].name;
            let mut parts: Vec<String> = Vec::new();
            for (k, c) in coeffs.iter().enumerate() {
                if c.is_structural_zero() {
                    continue;
                }
                let cs = rep_to_string(t, c);
                let var = match k {
                    0 => String::new(),
                    1 => name.clone(),
                    _ => format!("{}^{}", name, k),
                };
                let needs_paren = cs.contains('+') || (cs.contains('-') && !cs.starts_with('-'));
                let cs = if needs_paren && k > 0 { format!("({})", cs) } else { cs };
                if var.is_empty() {
                    parts.push(cs);
                } else if cs == "1" {
                    parts.push(var);
                } else if cs == "-1" {
                    parts.push(format!("-{}", var));
                } else {
                    parts.push(format!("{}*{}", cs, var));
                }
            }
            if parts.is_empty() {
                "0".to_string()
            } else {
                parts.join("+").replace("+-", "-")
            }
        }
    }
}

/// Informational complex approximation; carries no semantic weight.
/// Generators are approximated by Durand-Kerner on their defining
/// polynomials, picking the root with smallest (re, im) lexicographically.
pub fn rep_approx(t: &Tower, a: &Rep) -> (f64, f64) {
    fn approx_levels(t: &Tower) -> Vec<(f64, f64)> {
        let mut gens: Vec<(f64, f64)> = Vec::new();
        for (idx, lv) in t.levels.iter().enumerate() {
            let coeffs: Vec<(f64, f64)> = lv
                .minpoly
                .iter()
                .map(|c| rep_approx_with(t, c, &gens[..idx]))
                .collect();
            let mut roots = durand_kerner(&coeffs);
            roots.sort_by(|a, b| {
                a.0.partial_cmp(&b.0).unwrap().then(a.1.partial_cmp(&b.1).unwrap())
            });
            gens.push(roots[0]);
        }
        gens
    }
    fn rep_approx_with(t: &Tower, a: &Rep, gens: &[(f64, f64)]) -> (f64, f64) {
        match a {
            Rep::Base(c) => (rat_f64(&c.re), rat_f64(&c.im)),
            Rep::Ext { level, coeffs } => {
                let g = gens[*level - 1];
                let mut acc = (0.0, 0.0);
                for c in coeffs.iter().rev() {
                    acc = cmul(acc, g);
                    let v = rep_approx_with(t, c, gens);
                    acc = (acc.0 + v.0, acc.1 + v.1);
                }
                acc
            }
        }
    }
    let gens = approx_levels(t);
    rep_approx_with(t, a, &gens)
}

fn rat_f64(r: &Rat) -> f64 {
    let n = r.numer().to_string().parse::<f64>().unwrap_or(f64::NAN);
    let d = r.denom().to_string().parse::<f64>().unwrap_or(f64::NAN);
    n / d
}

fn cmul(a: (f64, f64), b: (f64, f64)) -> (f64, f64) {
    (a.0 * b.0 - a.1 * b.1, a.0 * b.1 + a.1 * b.0)
}

fn durand_kerner(coeffs: &[(f64, f64)]) -> Vec<(f64, f64)> {
    let n = coeffs.len() - 1;
    let lead = coeffs[n];
    let monic: Vec<(f64, f64)> = coeffs
        .iter()
        .map(|c| {
            let d = lead.0 * lead.0 + lead.1 * lead.1;
            cmul(*c, (lead.0 / d, -lead.1 / d))
        })
        .collect();
    let eval = |z: (f64, f64)| {
        let mut acc = (0.0, 0.0);
        for c in monic.iter().rev() {
            acc = cmul(acc, z);
            acc = (acc.0 + c.0, acc.1 + c.1);
        }
        acc
    };
    let mut roots: Vec<(f64, f64)> = (0..n)
        .map(|k| {
            let ang = 2.0 * std::f64::consts::PI * (k as f64) / (n as f64) + 0.4;
            (1.2f64.powi(k as i32 + 1) * ang.cos(), 1.2f64.powi(k as i32 + 1) * ang.sin())
        })
        .collect();
    for _ in 0..200 {
        let mut next = roots.clone();
        for i in 0..n {
            let mut den = (1.0, 0.0);
            for j in 0..n {
                if i != j {
                    den = cmul(den, (roots[i].0 - roots[j].0, roots[i].1 - roots[j].1));
                }
            }
            let v = eval(roots[i]);
            let d2 = den.0 * den.0 + den.1 * den.1;
            if d2 == 0.0 {
                continue;
            }
            let q = cmul(v, (den.0 / d2, -den.1 / d2));
            next[i] = (roots[i].0 - q.0, roots[i].1 - q.1);
        }
        roots = next;
    }
    roots
}

impl fmt::Display for Tower {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.levels.is_empty() {
            return write!(f, "Q(i)");
        }
        write!(f, "Q(i)")?;
        for lv in &self.levels {
            let prefix = Tower { levels: Vec::new() };
            let _ = prefix;
            write!(f, "[{}: ", lv.name)?;
            let terms: Vec<String> = lv
                .minpoly
                .iter()
                .enumerate()
                .filter(|(_, c)| !c.is_structural_zero())
                .map(|(k, c)| {
                    let cs = rep_to_string(self, c);
                    match k {
                        0 => cs,
                        1 if cs == "1" => "t".to_string(),
                        1 => format!("({})*t", cs),
                        _ if cs == "1" => format!("t^{}", k),
                        _ => format!("({})*t^{}", cs, k),
                    }
                })
                .collect();
            write!(f, "{} = 0]", terms.join("+").replace("+-", "-"))?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gaussian::rat;

    fn q(n: i64) -> Rep {
        Rep::from_i64(n)
    }

    #[test]
    fn gaussian_field_ops_in_tower() {
        let t = Tower::base();
        let one_plus_i = Rep::Base(GaussianRational::new(rat_i64(1), rat_i64(1)));
        let one_minus_i = Rep::Base(GaussianRational::new(rat_i64(1), rat_i64(-1)));
        assert_eq!(t.mul(&one_plus_i, &one_minus_i), q(2));
    }

    #[test]
    fn defining_relation_collapses() {
        // theta^2 = 6 for theta adjoined with t^2 - 6
        let t = Tower::base();
        let adj = t.adjoin_root(&[q(-6), q(0), q(1)]).unwrap();
        let theta = adj.root.clone();
        let t = adj.tower;
        assert_eq!(t.mul(&theta, &theta), q(6));
        // (theta+1)/(theta+1) = 1
        let e = t.add(&theta, &q(1));
        assert_eq!(t.div(&e, &e).unwrap(), q(1));
    }

    #[test]
    fn division_by_identical_element() {
        let t = Tower::base();
        let adj = t.adjoin_root(&[q(-2), q(0), q(1)]).unwrap();
        let t = adj.tower;
        let e = t.add(&adj.root, &q(1));
        assert_eq!(t.div(&e, &e).unwrap(), q(1));
    }

    #[test]
    fn adjoin_t2_minus_1_resolves_in_field() {
        // t^2 - 1 splits over Q(i); no extension happens
        let t = Tower::base();
        let adj = t.adjoin_root(&[q(-1), q(0), q(1)]).unwrap();
        assert_eq!(adj.tower.depth(), 0);
        let sq = adj.tower.mul(&adj.root, &adj.root);
        assert_eq!(sq, q(1));
    }

    #[test]
    fn is_zero_splits_on_reducible_minpoly() {
        // Build a tower with the reducible t^2 - 1 directly; theta - 1 is
        // zero on one branch only.
        let t = Arc::new(Tower {
            levels: vec![Level { name: "t1".into(), minpoly: vec![q(-1), q(0), q(1)] }],
        });
        let theta = Rep::Ext { level: 1, coeffs: vec![q(0), q(1)] };
        let e = t.sub(&theta, &q(1));
        match t.is_zero(&e) {
            Err(Error::TowerSplit(branches)) => {
                assert_eq!(branches.len(), 2);
                let mut answers: Vec<bool> = branches
                    .iter()
                    .map(|b| {
                        let m = b.migrate(&e);
                        b.is_zero(&m).unwrap()
                    })
                    .collect();
                answers.sort();
                assert_eq!(answers, vec![false, true]);
                // branch defining polynomials multiply back to the original
                for b in &branches {
                    assert_eq!(b.levels[0].minpoly.len(), 2);
                }
            }
            other => panic!("expected split, got {:?}", other),
        }
    }

    #[test]
    fn defining_relation_zero_test() {
        let t = Tower::base();
        let adj = t.adjoin_root(&[q(-2), q(0), q(1)]).unwrap();
        let t = adj.tower;
        let e = t.sub(&t.mul(&adj.root, &adj.root), &q(2));
        assert!(t.is_zero(&e).unwrap());
    }

    #[test]
    fn adjoin_linear_stays_in_field() {
        let t = Tower::base();
        let adj = t.adjoin_root(&[q(-5), q(1)]).unwrap();
        assert_eq!(adj.tower.depth(), 0);
        assert_eq!(adj.root, q(5));
    }

    #[test]
    fn adjoin_sqrt_minus_two_relates_to_sqrt_two() {
        // theta^2 = -2 over Q(i); (theta/i)^2 - 2 must vanish
        let t = Tower::base();
        let adj = t.adjoin_root(&[q(2), q(0), q(1)]).unwrap();
        let t = adj.tower;
        assert_eq!(t.depth(), 1);
        let i = Rep::from_gaussian(GaussianRational::i());
        let ratio = t.div(&adj.root, &i).unwrap();
        let e = t.sub(&t.mul(&ratio, &ratio), &q(2));
        assert!(t.is_zero(&e).unwrap());
    }

    #[test]
    fn quadratic_with_gaussian_square_disc_needs_no_extension() {
        // t^2 - 2i = (t - (1+i))(t + (1+i))
        let t = Tower::base();
        let adj = t
            .adjoin_root(&[Rep::Base(GaussianRational::new(rat_i64(0), rat_i64(-2))), q(0), q(1)])
            .unwrap();
        assert_eq!(adj.tower.depth(), 0);
        let sq = adj.tower.mul(&adj.root, &adj.root);
        assert_eq!(sq, Rep::Base(GaussianRational::new(rat_i64(0), rat_i64(2))));
    }

    #[test]
    fn roots_of_unity() {
        let t = Tower::base();
        let a = t.adjoin_root_of_unity(2).unwrap();
        assert_eq!(a.root, q(-1));
        let a = t.adjoin_root_of_unity(4).unwrap();
        assert_eq!(a.root, Rep::Base(GaussianRational::i()));
        let a = t.adjoin_root_of_unity(3).unwrap();
        let tw = a.tower.clone();
        assert_eq!(tw.depth(), 1);
        // theta^2 + theta + 1 = 0 and theta^3 = 1
        let cube = tw.pow(&a.root, 3);
        assert_eq!(cube, q(1));
        // zeta_6 = -zeta_3^2 reuses the same level
        let a6 = tw.adjoin_root_of_unity(6).unwrap();
        assert_eq!(a6.tower.depth(), 1);
        assert_eq!(a6.tower.pow(&a6.root, 6), q(1));
        assert_ne!(a6.tower.pow(&a6.root, 3), q(1));
    }

    #[test]
    fn squarefree_part_examples() {
        let t = Tower::base();
        // (t-1)^2 (t+2) -> (t-1)(t+2) monic
        let p = [q(2), q(-3), q(0), q(1)];
        let sf = t.poly_squarefree_part(0, &p).unwrap();
        assert_eq!(sf, vec![q(-2), q(1), q(1)]);
        // t^3 -> t
        let sf = t.poly_squarefree_part(0, &[q(0), q(0), q(0), q(1)]).unwrap();
        assert_eq!(sf, vec![q(0), q(1)]);
        // squarefree input unchanged (made monic)
        let sf = t.poly_squarefree_part(0, &[q(-2), q(0), q(2)]).unwrap();
        assert_eq!(sf, vec![q(-1), q(0), q(1)]);
    }

    #[test]
    fn eval_of_minpoly_at_root_is_zero() {
        let t = Tower::base();
        let p = vec![q(3), q(-1), q(2), q(1)];
        let adj = t.adjoin_root(&p).unwrap();
        let v = adj.tower.poly_eval(&p, &adj.root);
        assert!(adj.tower.is_zero(&v).unwrap());
    }

    #[test]
    fn all_roots_with_multiplicity() {
        let t = Tower::base();
        // (t-1)^2 (t+3)
        let p = [q(3), q(-5), q(1), q(1)];
        let (t2, roots) = all_roots(&t, &p).unwrap();
        assert_eq!(t2.depth(), 0);
        let mut got: Vec<(i64, u32)> = roots
            .iter()
            .map(|(r, m)| match r {
                Rep::Base(c) => (c.re.to_integer().try_into().unwrap(), *m),
                _ => panic!(),
            })
            .collect();
        got.sort();
        assert_eq!(got, vec![(-3, 1), (1, 2)]);
    }

    #[test]
    fn nested_tower_arithmetic() {
        // Q(i) < Q(i, sqrt6) < Q(i, sqrt6, sqrt(-2)); check mixed products
        let t = Tower::base();
        let a = t.adjoin_root(&[q(-6), q(0), q(1)]).unwrap();
        let t = a.tower;
        let s6 = a.root;
        let b = t.adjoin_root(&[q(2), q(0), q(1)]).unwrap();
        let t = b.tower;
        let im2 = b.root;
        // (sqrt6 * i sqrt2)^2 = -72
        let prod = t.mul(&s6, &im2);
        let sq = t.mul(&prod, &prod);
        assert_eq!(sq, q(-12));
        // inverse of (sqrt6 + i sqrt2): multiply back to 1
        let s = t.add(&s6, &im2);
        let sinv = t.inv(&s).unwrap();
        assert_eq!(t.mul(&s, &sinv), q(1));
    }

    #[test]
    fn approx_of_sqrt6() {
        let t = Tower::base();
        let a = t.adjoin_root(&[q(-6), q(0), q(1)]).unwrap();
        let (re, im) = rep_approx(&a.tower, &a.root);
        assert!(im.abs() < 1e-6);
        assert!((re.abs() - 6f64.sqrt()).abs() < 1e-6);
    }
}
