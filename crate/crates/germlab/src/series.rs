//! Truncated Puiseux series with exact coefficients and explicit truncation.
//!
//! A series carries the exponents it knows (all strictly below `trunc`) and
//! every order or contact query either answers exactly or fails with
//! `Unresolved`.  Arithmetic propagates truncations so that a result's known
//! prefix is correct for every completion of the operands.

use crate::error::{Error, Result};
use crate::gaussian::Rat;
use crate::tower::{Rep, Tower};
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use std::cmp::Ordering;
use std::fmt;
use std::sync::Arc;

/// A rational extended with +infinity; used for orders, contacts and
/// truncations.
#[derive(Clone, PartialEq, Eq, Debug)]
pub enum ExtRat {
    Fin(Rat),
    Inf,
}

impl ExtRat {
    pub fn fin(&self) -> Option<&Rat> {
        match self {
            ExtRat::Fin(r) => Some(r),
            ExtRat::Inf => None,
        }
    }

    pub fn is_inf(&self) -> bool {
        matches!(self, ExtRat::Inf)
    }

    pub fn min(self, other: ExtRat) -> ExtRat {
        if self <= other { self } else { other }
    }

    pub fn add_rat(&self, r: &Rat) -> ExtRat {
        match self {
            ExtRat::Fin(a) => ExtRat::Fin(a + r),
            ExtRat::Inf => ExtRat::Inf,
        }
    }

    pub fn add(&self, other: &ExtRat) -> ExtRat {
        match (self, other) {
            (ExtRat::Fin(a), ExtRat::Fin(b)) => ExtRat::Fin(a + b),
            _ => ExtRat::Inf,
        }
    }
}

impl PartialOrd for ExtRat {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for ExtRat {
    fn cmp(&self, other: &Self) -> Ordering {
        match (self, other) {
            (ExtRat::Fin(a), ExtRat::Fin(b)) => a.cmp(b),
            (ExtRat::Fin(_), ExtRat::Inf) => Ordering::Less,
            (ExtRat::Inf, ExtRat::Fin(_)) => Ordering::Greater,
            (ExtRat::Inf, ExtRat::Inf) => Ordering::Equal,
        }
    }
}

impl fmt::Display for ExtRat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ExtRat::Fin(r) => write!(f, "{}", r),
            ExtRat::Inf => write!(f, "inf"),
        }
    }
}

/// A truncated fractional power series in y with tower coefficients.
/// Terms are sorted by strictly increasing exponent, all below `trunc`;
/// stored coefficients are nonzero.
#[derive(Clone, Debug)]
pub struct PuiseuxSeries {
    pub tower: Arc<Tower>,
    pub terms: Vec<(Rat, Rep)>,
    pub trunc: ExtRat,
}

impl PuiseuxSeries {
    pub fn zero(tower: Arc<Tower>) -> Self {
        PuiseuxSeries { tower, terms: Vec::new(), trunc: ExtRat::Inf }
    }

    /// Build from terms, dropping zero coefficients (structurally; callers
    /// with nontrivial towers should have reduced coefficients already).
    pub fn from_terms(tower: Arc<Tower>, mut terms: Vec<(Rat, Rep)>, trunc: ExtRat) -> Result<Self> {
        terms.sort_by(|a, b| a.0.cmp(&b.0));
        let mut clean: Vec<(Rat, Rep)> = Vec::with_capacity(terms.len());
        for (e, c) in terms {
            if let ExtRat::Fin(t) = &trunc {
                if &e >= t {
                    continue;
                }
            }
            if tower.is_zero(&c)? {
                continue;
            }
            if let Some(last) = clean.last() {
                if last.0 == e {
                    return Err(Error::InvalidInput("duplicate exponent in series terms".into()));
                }
            }
            clean.push((e, c));
        }
        Ok(PuiseuxSeries { tower, terms: clean, trunc })
    }

    pub fn monomial(tower: Arc<Tower>, e: Rat, c: Rep) -> Self {
        PuiseuxSeries { tower, terms: vec![(e, c)], trunc: ExtRat::Inf }
    }

    pub fn is_exact_zero(&self) -> bool {
        self.terms.is_empty() && self.trunc.is_inf()
    }

    /// Order of the series: exponent of the first term, +inf for exact zero,
    /// `Unresolved` when no terms are known but the truncation is finite.
    pub fn ord(&self) -> Result<ExtRat> {
        if let Some((e, _)) = self.terms.first() {
            return Ok(ExtRat::Fin(e.clone()));
        }
        match &self.trunc {
            ExtRat::Inf => Ok(ExtRat::Inf),
            ExtRat::Fin(t) => Err(Error::Unresolved(format!(
                "order unknown: no terms below truncation {}",
                t
            ))),
        }
    }

    pub fn leading_coeff(&self) -> Option<&Rep> {
        self.terms.first().map(|(_, c)| c)
    }

    /// Coefficient of y^e, certified by the truncation.
    pub fn coeff_at(&self, e: &Rat) -> Result<Rep> {
        if let ExtRat::Fin(t) = &self.trunc {
            if e >= t {
                return Err(Error::Unresolved(format!(
                    "coefficient at {} not below truncation {}",
                    e, t
                )));
            }
        }
        for (ex, c) in &self.terms {
            if ex == e {
                return Ok(c.clone());
            }
        }
        Ok(Rep::zero())
    }

    fn lift(&self, tower: &Arc<Tower>) -> PuiseuxSeries {
        if Arc::ptr_eq(&self.tower, tower) {
            return self.clone();
        }
        debug_assert!(tower.extends(&self.tower));
        PuiseuxSeries { tower: tower.clone(), terms: self.terms.clone(), trunc: self.trunc.clone() }
    }

    fn join_tower(a: &PuiseuxSeries, b: &PuiseuxSeries) -> Arc<Tower> {
        if a.tower.depth() >= b.tower.depth() {
            a.tower.clone()
        } else {
            b.tower.clone()
        }
    }

    pub fn add(&self, rhs: &PuiseuxSeries) -> Result<PuiseuxSeries> {
        let tower = Self::join_tower(self, rhs);
        let a = self.lift(&tower);
        let b = rhs.lift(&tower);
        let trunc = a.trunc.clone().min(b.trunc.clone());
        let mut terms: Vec<(Rat, Rep)> = Vec::with_capacity(a.terms.len() + b.terms.len());
        let (mut i, mut j) = (0, 0);
        while i < a.terms.len() || j < b.terms.len() {
            let take_a = match (a.terms.get(i), b.terms.get(j)) {
                (Some(x), Some(y)) => match x.0.cmp(&y.0) {
                    Ordering::Less => Some(true),
                    Ordering::Greater => Some(false),
                    Ordering::Equal => None,
                },
                (Some(_), None) => Some(true),
                (None, Some(_)) => Some(false),
                (None, None) => break,
            };
            match take_a {
                Some(true) => {
                    terms.push(a.terms[i].clone());
                    i += 1;
                }
                Some(false) => {
                    terms.push(b.terms[j].clone());
                    j += 1;
                }
                None => {
                    let s = tower.add(&a.terms[i].1, &b.terms[j].1);
                    if !tower.is_zero(&s)? {
                        terms.push((a.terms[i].0.clone(), s));
                    }
                    i += 1;
                    j += 1;
                }
            }
        }
        if let ExtRat::Fin(t) = &trunc {
            terms.retain(|(e, _)| e < t);
        }
        Ok(PuiseuxSeries { tower, terms, trunc })
    }

    pub fn neg(&self) -> PuiseuxSeries {
        PuiseuxSeries {
            tower: self.tower.clone(),
            terms: self.terms.iter().map(|(e, c)| (e.clone(), self.tower.neg(c))).collect(),
            trunc: self.trunc.clone(),
        }
    }

    pub fn sub(&self, rhs: &PuiseuxSeries) -> Result<PuiseuxSeries> {
        self.add(&rhs.neg())
    }

    /// Product with the truncation rule
    /// trunc = min(trunc_a + ord(b), trunc_b + ord(a)), capped by `cap`.
    pub fn mul_capped(&self, rhs: &PuiseuxSeries, cap: Option<&Rat>) -> Result<PuiseuxSeries> {
        let tower = Self::join_tower(self, rhs);
        let a = self.lift(&tower);
        let b = rhs.lift(&tower);
        if a.is_exact_zero() || b.is_exact_zero() {
            return Ok(PuiseuxSeries::zero(tower));
        }
        let ord_a = match a.terms.first() {
            Some((e, _)) => ExtRat::Fin(e.clone()),
            None => a.trunc.clone(), // no known terms: ord >= trunc
        };
        let ord_b = match b.terms.first() {
            Some((e, _)) => ExtRat::Fin(e.clone()),
            None => b.trunc.clone(),
        };
        let mut trunc = a.trunc.add(&ord_b).min(b.trunc.add(&ord_a));
        if let Some(c) = cap {
            trunc = trunc.min(ExtRat::Fin(c.clone()));
        }
        let mut acc: std::collections::BTreeMap<Rat, Rep> = std::collections::BTreeMap::new();
        for (ea, ca) in &a.terms {
            for (eb, cb) in &b.terms {
                let e = ea + eb;
                if let ExtRat::Fin(t) = &trunc {
                    if &e >= t {
                        continue;
                    }
                }
                let p = tower.mul(ca, cb);
                acc.entry(e)
                    .and_modify(|v| *v = tower.add(v, &p))
                    .or_insert(p);
            }
        }
        let mut terms = Vec::with_capacity(acc.len());
        for (e, c) in acc {
            if !tower.is_zero(&c)? {
                terms.push((e, c));
            }
        }
        Ok(PuiseuxSeries { tower, terms, trunc })
    }

    pub fn mul(&self, rhs: &PuiseuxSeries) -> Result<PuiseuxSeries> {
        self.mul_capped(rhs, None)
    }

    pub fn scale(&self, c: &Rep) -> Result<PuiseuxSeries> {
        if self.tower.is_zero(c)? {
            return Ok(PuiseuxSeries { tower: self.tower.clone(), terms: Vec::new(), trunc: self.trunc.clone() });
        }
        let mut terms = Vec::with_capacity(self.terms.len());
        for (e, v) in &self.terms {
            let p = self.tower.mul(v, c);
            if !self.tower.is_zero(&p)? {
                terms.push((e.clone(), p));
            }
        }
        Ok(PuiseuxSeries { tower: self.tower.clone(), terms, trunc: self.trunc.clone() })
    }

    /// Strict jet: keep terms with exponent < e, cap the truncation at e.
    pub fn truncate(&self, e: &ExtRat) -> PuiseuxSeries {
        let trunc = self.trunc.clone().min(e.clone());
        let terms = match &trunc {
            ExtRat::Inf => self.terms.clone(),
            ExtRat::Fin(t) => self.terms.iter().filter(|(ex, _)| ex < t).cloned().collect(),
        };
        PuiseuxSeries { tower: self.tower.clone(), terms, trunc }
    }

    /// Contact order: ord(self - rhs); +inf only when both series are exact
    /// and equal.  `Unresolved` when they agree on the whole known overlap.
    pub fn contact(&self, rhs: &PuiseuxSeries) -> Result<ExtRat> {
        let d = self.sub(rhs)?;
        d.ord()
    }

    /// Ramification index visible in the stored terms: lcm of exponent
    /// denominators.
    pub fn visible_ramification(&self) -> u32 {
        let mut n: num_bigint::BigInt = One::one();
        for (e, _) in &self.terms {
            n = n.lcm(e.denom());
        }
        n.try_into().unwrap_or(1)
    }

    /// The conjugate under exponent-wise root-of-unity action: the
    /// coefficient of y^(n/ram) picks up eps^(k*n).
    pub fn conjugate(&self, ram: u32, k: u32, eps_pows: &[Rep]) -> PuiseuxSeries {
        if ram <= 1 || k == 0 {
            return self.clone();
        }
        let terms = self
            .terms
            .iter()
            .map(|(e, c)| {
                let n = (e * Rat::from_integer(ram.into())).to_integer();
                debug_assert!(!n.is_negative());
                let n: u64 = n.try_into().unwrap();
                let idx = ((u64::from(k) * n) % u64::from(ram)) as usize;
                (e.clone(), self.tower.mul(c, &eps_pows[idx]))
            })
            .collect();
        PuiseuxSeries { tower: self.tower.clone(), terms, trunc: self.trunc.clone() }
    }

    /// Multiplicative inverse as a series, to precision `prec` above -ord.
    pub fn inverse(&self, prec: &Rat) -> Result<PuiseuxSeries> {
        let (e0, c0) = match self.terms.first() {
            Some(t) => t.clone(),
            None => return Err(Error::DivisionByZero),
        };
        let tower = self.tower.clone();
        let c0inv = tower.inv(&c0)?;
        // self = c0 y^e0 (1 + u), ord u > 0; invert the unit by geometric series
        let mut u_terms = Vec::new();
        for (e, c) in self.terms.iter().skip(1) {
            u_terms.push((e - &e0, tower.mul(c, &c0inv)));
        }
        let u = PuiseuxSeries {
            tower: tower.clone(),
            terms: u_terms,
            trunc: match &self.trunc {
                ExtRat::Fin(t) => ExtRat::Fin(t - &e0),
                ExtRat::Inf => ExtRat::Inf,
            },
        };
        let mut acc = PuiseuxSeries::monomial(tower.clone(), Rat::zero(), Rep::one());
        let mut pow = PuiseuxSeries::monomial(tower.clone(), Rat::zero(), Rep::one());
        // terms of u have ord >= some delta > 0; enough powers to pass prec
        let delta = match u.terms.first() {
            Some((e, _)) => e.clone(),
            None => {
                // unit is exactly 1 up to truncation
                let mut inv = PuiseuxSeries::monomial(tower.clone(), -e0.clone(), c0inv);
                inv.trunc = u.trunc.add_rat(&(-e0));
                if u.trunc.is_inf() && u.terms.is_empty() {
                    inv.trunc = ExtRat::Inf;
                }
                return Ok(inv.truncate(&ExtRat::Fin(prec.clone())).clone());
            }
        };
        let mut k = Rat::zero();
        let target = prec + &e0; // precision needed for the unit inverse
        while &k < &target {
            pow = pow.mul_capped(&u, Some(&target))?.neg();
            if pow.terms.is_empty() {
                break;
            }
            acc = acc.add(&pow)?;
            k += &delta;
        }
        acc.trunc = acc.trunc.min(u.trunc.clone()).min(ExtRat::Fin(target));
        let mut out_terms = Vec::with_capacity(acc.terms.len());
        for (e, c) in &acc.terms {
            let v = tower.mul(c, &c0inv);
            if !tower.is_zero(&v)? {
                out_terms.push((e - &e0, v));
            }
        }
        let out_trunc = match &acc.trunc {
            ExtRat::Fin(t) => ExtRat::Fin(t - &e0),
            ExtRat::Inf => ExtRat::Inf,
        };
        Ok(PuiseuxSeries { tower, terms: out_terms, trunc: out_trunc })
    }

    /// Render with at most `max_terms` leading terms.
    pub fn display(&self, max_terms: usize) -> String {
        if self.terms.is_empty() {
            return match &self.trunc {
                ExtRat::Inf => "0".to_string(),
                ExtRat::Fin(t) => format!("O(y^{})", t),
            };
        }
        let mut parts = Vec::new();
        for (e, c) in self.terms.iter().take(max_terms) {
            let cs = crate::tower::rep_to_string(&self.tower, c);
            let coeff = if cs == "1" && !e.is_zero() {
                String::new()
            } else if cs == "-1" && !e.is_zero() {
                "-".to_string()
            } else if cs.contains('+') || cs.contains('-') && !cs.starts_with('-') || cs.contains('*') {
                format!("({})", cs)
            } else {
                cs
            };
            let ypart = if e.is_zero() {
                if coeff.is_empty() || coeff == "-" {
                    format!("{}1", coeff)
                } else {
                    coeff.clone()
                }
            } else if e.is_one() {
                if coeff.is_empty() || coeff == "-" {
                    format!("{}y", coeff)
                } else {
                    format!("{}*y", coeff)
                }
            } else {
                let estr = if e.denom().is_one() { format!("{}", e) } else { format!("({})", e) };
                if coeff.is_empty() || coeff == "-" {
                    format!("{}y^{}", coeff, estr)
                } else {
                    format!("{}*y^{}", coeff, estr)
                }
            };
            let ypart = if e.is_zero() && !(coeff.is_empty() || coeff == "-") { coeff } else { ypart };
            parts.push(ypart);
        }
        let mut s = parts[0].clone();
        for p in &parts[1..] {
            if let Some(stripped) = p.strip_prefix('-') {
                s.push_str(" - ");
                s.push_str(stripped);
            } else {
                s.push_str(" + ");
                s.push_str(p);
            }
        }
        if self.terms.len() > max_terms {
            s.push_str(" + ...");
        } else if let ExtRat::Fin(t) = &self.trunc {
            s.push_str(&format!(" + O(y^{})", t));
        }
        s
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gaussian::{rat, rat_i64};

    fn t() -> Arc<Tower> {
        Tower::base()
    }

    fn mono(e: Rat, c: i64) -> PuiseuxSeries {
        PuiseuxSeries::monomial(t(), e, Rep::from_i64(c))
    }

    fn series(terms: &[(Rat, i64)]) -> PuiseuxSeries {
        PuiseuxSeries::from_terms(
            t(),
            terms.iter().map(|(e, c)| (e.clone(), Rep::from_i64(*c))).collect(),
            ExtRat::Inf,
        )
        .unwrap()
    }

    #[test]
    fn ord_examples() {
        // y^2 - y^3 has order 2
        let s = series(&[(rat_i64(2), 1), (rat_i64(3), -1)]);
        assert_eq!(s.ord().unwrap(), ExtRat::Fin(rat_i64(2)));
        // exact zero has order +inf
        assert_eq!(PuiseuxSeries::zero(t()).ord().unwrap(), ExtRat::Inf);
        // fractional leading exponent
        let s = PuiseuxSeries::monomial(t(), rat(9, 2), Rep::from_rat(rat(1, 2)));
        assert_eq!(s.ord().unwrap(), ExtRat::Fin(rat(9, 2)));
        // no terms below a finite truncation: unresolved
        let s = PuiseuxSeries { tower: t(), terms: vec![], trunc: ExtRat::Fin(rat_i64(5)) };
        assert!(matches!(s.ord(), Err(Error::Unresolved(_))));
    }

    #[test]
    fn arithmetic_examples() {
        // (y^2 - y^3) - (y^2 + y^3) = -2 y^3
        let a = series(&[(rat_i64(2), 1), (rat_i64(3), -1)]);
        let b = series(&[(rat_i64(2), 1), (rat_i64(3), 1)]);
        let d = a.sub(&b).unwrap();
        assert_eq!(d.terms.len(), 1);
        assert_eq!(d.terms[0], (rat_i64(3), Rep::from_i64(-2)));
        // s + 0 = s
        let z = PuiseuxSeries::zero(t());
        let s = a.add(&z).unwrap();
        assert_eq!(s.terms, a.terms);
        assert_eq!(s.trunc, ExtRat::Inf);
        // y^(3/2) * y^(3/2) = y^3
        let h = mono(rat(3, 2), 1);
        let p = h.mul(&h).unwrap();
        assert_eq!(p.terms, vec![(rat_i64(3), Rep::from_i64(1))]);
    }

    #[test]
    fn truncation_rules() {
        // mul truncation: min(w_a + ord b, w_b + ord a)
        let mut a = series(&[(rat_i64(1), 1)]);
        a.trunc = ExtRat::Fin(rat_i64(4));
        let mut b = series(&[(rat_i64(2), 1)]);
        b.trunc = ExtRat::Fin(rat_i64(3));
        let p = a.mul(&b).unwrap();
        assert_eq!(p.trunc, ExtRat::Fin(rat_i64(4))); // min(4+2, 3+1)
        // truncate drops the boundary exponent
        let s = series(&[(rat_i64(2), 1), (rat_i64(3), -1)]);
        let tr = s.truncate(&ExtRat::Fin(rat_i64(3)));
        assert_eq!(tr.terms.len(), 1);
        assert_eq!(tr.terms[0].0, rat_i64(2));
        // truncate(s, +inf) = s
        let tr = s.truncate(&ExtRat::Inf);
        assert_eq!(tr.terms.len(), 2);
        // idempotence
        let tr2 = tr.truncate(&ExtRat::Fin(rat_i64(3))).truncate(&ExtRat::Fin(rat_i64(3)));
        assert_eq!(tr2.terms.len(), 1);
    }

    #[test]
    fn contact_examples() {
        let a = series(&[(rat_i64(2), 1)]);
        let b = series(&[(rat_i64(2), 1), (rat_i64(5), 1)]);
        assert_eq!(a.contact(&b).unwrap(), ExtRat::Fin(rat_i64(5)));
        // zeta1 = y^2 - y^3, zeta2 = y^2 + y^3: contact 3
        let z1 = series(&[(rat_i64(2), 1), (rat_i64(3), -1)]);
        let z2 = series(&[(rat_i64(2), 1), (rat_i64(3), 1)]);
        assert_eq!(z1.contact(&z2).unwrap(), ExtRat::Fin(rat_i64(3)));
        // contact(s, s) = +inf for exact series
        assert_eq!(z1.contact(&z1).unwrap(), ExtRat::Inf);
        // unresolved when truncations hide the difference
        let mut u = z1.clone();
        u.trunc = ExtRat::Fin(rat_i64(3));
        let mut v = z2.clone();
        v.trunc = ExtRat::Fin(rat_i64(3));
        let u = u.truncate(&ExtRat::Fin(rat_i64(3)));
        let v = v.truncate(&ExtRat::Fin(rat_i64(3)));
        assert!(matches!(u.contact(&v), Err(Error::Unresolved(_))));
    }

    #[test]
    fn conjugates_flip_odd_numerators() {
        // y^(3/2): conjugates are +/- y^(3/2)
        let s = mono(rat(3, 2), 1);
        let eps_pows = vec![Rep::one(), Rep::from_i64(-1)];
        let c = s.conjugate(2, 1, &eps_pows);
        assert_eq!(c.terms[0].1, Rep::from_i64(-1));
        // exponent 3 with ram 2: numerator 6 is even, unchanged
        let s2 = series(&[(rat_i64(3), 1)]);
        let c2 = s2.conjugate(2, 1, &eps_pows);
        assert_eq!(c2.terms[0].1, Rep::from_i64(1));
    }

    #[test]
    fn inverse_multiplies_to_one() {
        let s = series(&[(rat_i64(1), 2), (rat_i64(2), -3), (rat_i64(4), 5)]);
        let inv = s.inverse(&rat_i64(6)).unwrap();
        let p = s.mul(&inv).unwrap();
        assert_eq!(p.terms.len(), 1);
        assert_eq!(p.terms[0], (rat_i64(0), Rep::from_i64(1)));
    }

    #[test]
    fn ord_is_additive_on_products() {
        let a = series(&[(rat(3, 2), 4), (rat_i64(2), 1)]);
        let b = series(&[(rat(1, 2), 1), (rat_i64(1), 7)]);
        let p = a.mul(&b).unwrap();
        assert_eq!(p.ord().unwrap(), ExtRat::Fin(rat_i64(2)));
    }
}
