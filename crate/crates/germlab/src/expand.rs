//! Newton-Puiseux expansion: germ roots of bivariate polynomials as
//! truncated Puiseux series over a growing tower.
//!
//! The expansion works on "sheets": individual series roots, conjugates
//! listed separately.  A branch in the multi-root phase keeps the full
//! Taylor columns of the source at its prefix and steps by reading germ
//! faces off the Newton polygon; once a branch carries a single root and
//! satisfies the Hensel condition it switches to Newton refinement, which
//! certifies correctness of the prefix below ord S(x) - ord S'(x).

use crate::error::{Error, Result};
use crate::gaussian::Rat;
use crate::poly::Germ;
use crate::series::{ExtRat, PuiseuxSeries};
use crate::tower::{all_roots, Rep, Tower};
use num_traits::Zero;
use std::sync::Arc;

/// Polynomial in x whose coefficients are Puiseux series in y.
#[derive(Clone, Debug)]
pub struct SeriesPoly {
    pub tower: Arc<Tower>,
    pub cols: Vec<PuiseuxSeries>,
}

impl SeriesPoly {
    pub fn from_germ(g: &Germ, tower: &Arc<Tower>) -> SeriesPoly {
        let cols = g
            .cols
            .iter()
            .map(|c| {
                let terms = c
                    .0
                    .iter()
                    .enumerate()
                    .filter(|(_, v)| !v.is_zero())
                    .map(|(j, v)| (Rat::from_integer(j.into()), Rep::from_gaussian(v.clone())))
                    .collect();
                PuiseuxSeries { tower: tower.clone(), terms, trunc: ExtRat::Inf }
            })
            .collect();
        SeriesPoly { tower: tower.clone(), cols }
    }

    pub fn deg(&self) -> usize {
        self.cols.len().saturating_sub(1)
    }

    pub fn partial_x(&self) -> SeriesPoly {
        let cols = self
            .cols
            .iter()
            .enumerate()
            .skip(1)
            .map(|(i, c)| {
                c.scale(&Rep::from_rat(Rat::from_integer(i.into()))).expect("scaling by an integer cannot split")
            })
            .collect();
        SeriesPoly { tower: self.tower.clone(), cols }
    }

    /// Substitute x -> x + c*y^q.  `cap` truncates the columns.
    pub fn shift(&self, c: &Rep, q: &Rat, cap: Option<&Rat>) -> Result<SeriesPoly> {
        let n = self.cols.len();
        let tower = &self.tower;
        let mut out: Vec<PuiseuxSeries> =
            (0..n).map(|_| PuiseuxSeries::zero(tower.clone())).collect();
        // binomial row per k, powers of c as we go
        for k in 0..n {
            let colk = &self.cols[k];
            if colk.terms.is_empty() && colk.trunc.is_inf() {
                continue;
            }
            let mut binom = Rat::from_integer(1.into());
            let mut cpow = Rep::one();
            for d in 0..=k {
                let i = k - d;
                // C(k, d) * c^d * y^(q d) * colk  added to out[i]
                let coeff = tower.mul(&cpow, &Rep::from_rat(binom.clone()));
                let mut term = colk.scale(&coeff)?;
                if !term.terms.is_empty() || !term.trunc.is_inf() {
                    let delta = q * Rat::from_integer(d.into());
                    term = shift_exponents(&term, &delta);
                    if let Some(cp) = cap {
                        term = term.truncate(&ExtRat::Fin(cp.clone()));
                    }
                    out[i] = out[i].add(&term)?;
                }
                binom = binom * Rat::new((k - d).into(), (d + 1).into());
                cpow = tower.mul(&cpow, c);
            }
        }
        if let Some(cp) = cap {
            for col in out.iter_mut() {
                *col = col.truncate(&ExtRat::Fin(cp.clone()));
            }
        }
        Ok(SeriesPoly { tower: tower.clone(), cols: out })
    }

    /// Evaluate at a series by Horner.
    pub fn evaluate(&self, s: &PuiseuxSeries, cap: Option<&Rat>) -> Result<PuiseuxSeries> {
        let mut acc = PuiseuxSeries::zero(self.tower.clone());
        for col in self.cols.iter().rev() {
            acc = acc.mul_capped(s, cap)?;
            acc = acc.add(col)?;
        }
        if let Some(cp) = cap {
            acc = acc.truncate(&ExtRat::Fin(cp.clone()));
        }
        Ok(acc)
    }

    /// Taylor columns of self(x + s, y): coefficient of x^i.
    pub fn taylor_at(&self, s: &PuiseuxSeries, cap: Option<&Rat>) -> Result<Vec<PuiseuxSeries>> {
        let n = self.cols.len();
        let tower = &self.tower;
        let mut powers: Vec<PuiseuxSeries> =
            vec![PuiseuxSeries::monomial(tower.clone(), Rat::zero(), Rep::one())];
        for _ in 1..n {
            let next = powers.last().unwrap().mul_capped(s, cap)?;
            powers.push(next);
        }
        let mut out = Vec::with_capacity(n);
        for i in 0..n {
            let mut acc = PuiseuxSeries::zero(tower.clone());
            let mut binom = Rat::from_integer(1.into());
            for k in i..n {
                // C(k, i)
                let colk = &self.cols[k];
                if !(colk.terms.is_empty() && colk.trunc.is_inf()) {
                    let p = colk.mul_capped(&powers[k - i], cap)?;
                    let p = p.scale(&Rep::from_rat(binom.clone()))?;
                    acc = acc.add(&p)?;
                }
                binom = binom * Rat::new((k + 1).into(), (k + 1 - i).into());
            }
            if let Some(cp) = cap {
                acc = acc.truncate(&ExtRat::Fin(cp.clone()));
            }
            out.push(acc);
        }
        Ok(out)
    }
}

fn shift_exponents(s: &PuiseuxSeries, delta: &Rat) -> PuiseuxSeries {
    PuiseuxSeries {
        tower: s.tower.clone(),
        terms: s.terms.iter().map(|(e, c)| (e + delta, c.clone())).collect(),
        trunc: s.trunc.add_rat(delta),
    }
}

// ---- Newton polygon ----

/// Support of a polynomial in x with series coefficients: one point per
/// column with a resolved order, plus lower bounds for unresolved columns.
#[derive(Clone, Debug)]
pub struct NewtonPolygon {
    /// (i, ord of column i), i ascending, only resolved nonzero columns.
    pub points: Vec<(usize, Rat)>,
    /// columns whose order is only known to be >= the bound
    pub pending: Vec<(usize, Rat)>,
    /// columns that are exactly zero
    pub zero_cols: Vec<usize>,
}

#[derive(Clone, Debug)]
pub struct Edge {
    pub i_low: usize,
    pub i_high: usize,
    /// order gained per unit of x-degree lost: positive on germ edges
    pub coslope: Rat,
    /// value of the supporting line at i = 0
    pub intercept: Rat,
}

impl NewtonPolygon {
    pub fn from_columns(cols: &[PuiseuxSeries]) -> NewtonPolygon {
        let mut points = Vec::new();
        let mut pending = Vec::new();
        let mut zero_cols = Vec::new();
        for (i, c) in cols.iter().enumerate() {
            match c.terms.first() {
                Some((e, _)) => points.push((i, e.clone())),
                None => match &c.trunc {
                    ExtRat::Inf => zero_cols.push(i),
                    ExtRat::Fin(t) => pending.push((i, t.clone())),
                },
            }
        }
        NewtonPolygon { points, pending, zero_cols }
    }

    /// Vertices of the lower convex hull, i ascending.
    pub fn hull(&self) -> Vec<(usize, Rat)> {
        let pts = &self.points;
        if pts.is_empty() {
            return Vec::new();
        }
        let mut hull: Vec<(usize, Rat)> = Vec::new();
        for p in pts {
            while hull.len() >= 2 {
                let a = &hull[hull.len() - 2];
                let b = &hull[hull.len() - 1];
                // keep b only if it is strictly below segment a-p
                let lhs = (&b.1 - &a.1) * Rat::from_integer((p.0 - a.0).into());
                let rhs = (&p.1 - &a.1) * Rat::from_integer((b.0 - a.0).into());
                if lhs >= rhs {
                    hull.pop();
                } else {
                    break;
                }
            }
            hull.push(p.clone());
        }
        hull
    }

    /// Edges with strictly positive co-slope (j decreasing as i grows),
    /// i.e. the part of the hull carrying germ roots, sorted by co-slope
    /// ascending.
    pub fn germ_edges(&self) -> Vec<Edge> {
        let hull = self.hull();
        let mut edges = Vec::new();
        for w in hull.windows(2) {
            let (i1, j1) = (&w[0].0, &w[0].1);
            let (i2, j2) = (&w[1].0, &w[1].1);
            if j1 > j2 {
                let coslope = (j1 - j2) / Rat::from_integer((i2 - i1).into());
                let intercept = j1 + &coslope * Rat::from_integer((*i1).into());
                edges.push(Edge { i_low: *i1, i_high: *i2, coslope, intercept });
            }
        }
        edges.sort_by(|a, b| b.coslope.cmp(&a.coslope));
        edges
    }

    /// Check that no pending column could dip below the hull (or below the
    /// supporting lines of the germ edges).
    pub fn certified(&self) -> bool {
        if self.points.is_empty() {
            return self.pending.is_empty();
        }
        let hull = self.hull();
        for (i, bound) in &self.pending {
            // value of the hull's lower boundary at abscissa i (extended
            // horizontally beyond the ends)
            let val = hull_value_at(&hull, *i);
            if ExtRat::Fin(bound.clone()) <= val {
                return false;
            }
        }
        true
    }

    /// min over resolved support of (q*i + j); requires certification that
    /// pending columns cannot undercut.
    pub fn tropical_eval(&self, q: &Rat) -> Result<Rat> {
        let mut best: Option<Rat> = None;
        for (i, j) in &self.points {
            let v = q * Rat::from_integer((*i).into()) + j;
            best = Some(match best {
                None => v,
                Some(b) => {
                    if v < b {
                        v
                    } else {
                        b
                    }
                }
            });
        }
        let best = best.ok_or_else(|| Error::Unresolved("empty support".into()))?;
        for (i, bound) in &self.pending {
            let v = q * Rat::from_integer((*i).into()) + bound;
            if v <= best {
                return Err(Error::Unresolved(format!(
                    "column {} unresolved below the tropical minimum",
                    i
                )));
            }
        }
        Ok(best)
    }

    /// Order of the x^0 column, when present and resolved.
    pub fn vertical_intercept(&self) -> Option<Rat> {
        self.points.first().filter(|(i, _)| *i == 0).map(|(_, j)| j.clone())
    }

    /// Co-slope of the highest germ edge (the one meeting the lowest i).
    pub fn highest_coslope(&self) -> Option<Rat> {
        self.germ_edges().last().map(|e| e.coslope.clone())
    }
}

fn hull_value_at(hull: &[(usize, Rat)], i: usize) -> ExtRat {
    if hull.is_empty() {
        return ExtRat::Inf;
    }
    if i <= hull[0].0 {
        if i == hull[0].0 {
            return ExtRat::Fin(hull[0].1.clone());
        }
        // left of the hull: no constraint from resolved points
        return ExtRat::Inf;
    }
    for w in hull.windows(2) {
        if w[0].0 <= i && i <= w[1].0 {
            let t = Rat::new((i - w[0].0).into(), (w[1].0 - w[0].0).into());
            return ExtRat::Fin(&w[0].1 + (&w[1].1 - &w[0].1) * t);
        }
    }
    ExtRat::Fin(hull.last().unwrap().1.clone())
}

/// Absolute Newton polygon of a germ (integer support).
pub fn germ_polygon(g: &Germ) -> NewtonPolygon {
    let mut points = Vec::new();
    let mut zero_cols = Vec::new();
    for (i, c) in g.cols.iter().enumerate() {
        match c.ord() {
            Some(j) => points.push((i, Rat::from_integer(j.into()))),
            None => zero_cols.push(i),
        }
    }
    NewtonPolygon { points, pending: Vec::new(), zero_cols }
}

// ---- sheets and expansion ----

/// One series root of the expanded polynomial.
#[derive(Clone, Debug)]
pub struct Sheet {
    pub series: PuiseuxSeries,
    /// multiplicity as a root of the full polynomial (Yun layer)
    pub mult: u32,
    /// root of the source exactly (series.trunc == Inf)
    pub exact: bool,
    source_idx: usize,
}

struct Branch {
    prefix: Vec<(Rat, Rep)>,
    last_exp: Rat,
    nroots: u32,
    mult: u32,
    source_idx: usize,
    cols: Vec<PuiseuxSeries>,
}

/// Expansion session for one polynomial: the Yun factors are expanded
/// sheet by sheet; sheets can later be refined to any finite precision.
pub struct Expansion {
    pub sheets: Vec<Sheet>,
    sources: Vec<SeriesPoly>,
    sources_dx: Vec<SeriesPoly>,
    /// total germ-root count with multiplicity
    pub total_mult: u32,
}

const MAX_STEPS: usize = 20_000;
const MAX_NEWTON: usize = 64;

impl Expansion {
    /// Expand the germ roots (order > 0) of `g`, sharing and growing the
    /// session tower.  Sheets are pairwise distinct but not yet separated
    /// to any particular depth; call `separate` / `refine_to` afterwards.
    pub fn germ_roots(tower: &mut Arc<Tower>, g: &Germ) -> Result<Expansion> {
        let layers = g.yun_x()?;
        let mut sources = Vec::new();
        let mut sources_dx = Vec::new();
        let mut sheets: Vec<Sheet> = Vec::new();
        let mut total = 0u32;
        for (factor, mult) in &layers {
            let source_idx = sources.len();
            let sp = SeriesPoly::from_germ(factor, tower);
            let spx = sp.partial_x();
            sources.push(sp.clone());
            sources_dx.push(spx);
            // count germ roots of the factor
            let poly = germ_polygon(factor);
            let width: usize = poly.germ_edges().iter().map(|e| e.i_high - e.i_low).sum();
            let i_min = factor.cols.iter().position(|c| !c.is_zero()).unwrap_or(0);
            let nroots = (width + i_min) as u32;
            if nroots == 0 {
                continue;
            }
            total += nroots * mult;
            let root_branch = Branch {
                prefix: Vec::new(),
                last_exp: Rat::zero(),
                nroots,
                mult: *mult,
                source_idx,
                cols: SeriesPoly::from_germ(factor, tower).cols,
            };
            let mut work = vec![root_branch];
            let mut steps = 0usize;
            while let Some(b) = work.pop() {
                steps += 1;
                if steps > MAX_STEPS {
                    return Err(Error::InvariantViolation("expansion did not terminate".into()));
                }
                step_branch(tower, b, &sources, &sources_dx, &mut work, &mut sheets)?;
            }
        }
        // all sheets must be pairwise distinct eventually; that is checked by
        // the separation pass in the caller
        Ok(Expansion { sheets, sources, sources_dx, total_mult: total })
    }

    /// Extend a sheet until its truncation reaches `target`.
    pub fn refine_to(&mut self, idx: usize, target: &Rat) -> Result<()> {
        let sheet = &self.sheets[idx];
        if sheet.exact {
            return Ok(());
        }
        if let ExtRat::Fin(t) = &sheet.series.trunc {
            if t >= target {
                return Ok(());
            }
        } else {
            return Ok(());
        }
        let source = &self.sources[sheet.source_idx];
        let source_dx = &self.sources_dx[sheet.source_idx];
        let mut x = as_exact(&sheet.series);
        for _ in 0..MAX_NEWTON {
            let der = source_dx.evaluate(&x, None)?;
            let w = match der.ord()? {
                ExtRat::Fin(w) => w,
                ExtRat::Inf => {
                    return Err(Error::InvariantViolation(
                        "vanishing derivative along a simple root".into(),
                    ))
                }
            };
            let cap = target + &w + Rat::from_integer(2.into());
            let val = source.evaluate(&x, Some(&cap))?;
            if val.is_exact_zero() {
                let sheet = &mut self.sheets[idx];
                sheet.series = x;
                sheet.series.trunc = ExtRat::Inf;
                sheet.exact = true;
                return Ok(());
            }
            let v = match val.ord() {
                Ok(ExtRat::Fin(v)) => v,
                Ok(ExtRat::Inf) => unreachable!(),
                Err(_) => {
                    // order beyond the cap: agreement certified past target
                    let sheet = &mut self.sheets[idx];
                    let mut s = x;
                    s.trunc = ExtRat::Fin(target.clone());
                    s = s.truncate(&ExtRat::Fin(target.clone()));
                    sheet.series = s;
                    return Ok(());
                }
            };
            let kappa = &v - &w;
            if &kappa >= target {
                let sheet = &mut self.sheets[idx];
                let mut s = x;
                s.trunc = ExtRat::Fin(kappa.min(target.clone()));
                let tr = s.trunc.clone();
                s = s.truncate(&tr);
                sheet.series = s;
                return Ok(());
            }
            // Newton step
            let der_inv = der.inverse(&(&cap - &v))?;
            let delta = val.mul_capped(&der_inv, Some(&cap))?;
            let xn = x.sub(&delta)?;
            x = as_exact(&xn.truncate(&ExtRat::Fin(cap.clone())));
        }
        Err(Error::InvariantViolation("Newton refinement did not converge".into()))
    }

    /// Evaluate the source polynomial this sheet solves at an arbitrary
    /// series (used by consistency tests).
    pub fn source_eval(&self, idx: usize, s: &PuiseuxSeries, cap: Option<&Rat>) -> Result<PuiseuxSeries> {
        self.sources[self.sheets[idx].source_idx].evaluate(s, cap)
    }
}

fn as_exact(s: &PuiseuxSeries) -> PuiseuxSeries {
    PuiseuxSeries { tower: s.tower.clone(), terms: s.terms.clone(), trunc: ExtRat::Inf }
}

fn prefix_series(tower: &Arc<Tower>, prefix: &[(Rat, Rep)], trunc: ExtRat) -> PuiseuxSeries {
    PuiseuxSeries { tower: tower.clone(), terms: prefix.to_vec(), trunc }
}

/// Process one branch: read the polygon, spawn children or emit sheets.
fn step_branch(
    tower: &mut Arc<Tower>,
    b: Branch,
    sources: &[SeriesPoly],
    sources_dx: &[SeriesPoly],
    work: &mut Vec<Branch>,
    sheets: &mut Vec<Sheet>,
) -> Result<()> {
    let poly = NewtonPolygon::from_columns(&b.cols);
    if !poly.certified() {
        return Err(Error::Unresolved("newton polygon not certified at current cap".into()));
    }
    // exact divisibility by x: the prefix itself is a root
    let col0_exact_zero = b
        .cols
        .first()
        .map_or(false, |c| c.terms.is_empty() && c.trunc.is_inf());
    let mut remaining = b.nroots;
    if col0_exact_zero {
        let zero_run = b
            .cols
            .iter()
            .take_while(|c| c.terms.is_empty() && c.trunc.is_inf())
            .count() as u32;
        if zero_run != 1 {
            return Err(Error::InvariantViolation(
                "multiple exact root inside a squarefree factor".into(),
            ));
        }
        sheets.push(Sheet {
            series: prefix_series(tower, &b.prefix, ExtRat::Inf),
            mult: b.mult,
            exact: true,
            source_idx: b.source_idx,
        });
        remaining -= 1;
    }
    let edges: Vec<Edge> = poly
        .germ_edges()
        .into_iter()
        .filter(|e| e.coslope > b.last_exp)
        .collect();
    let width: u32 = edges.iter().map(|e| (e.i_high - e.i_low) as u32).sum();
    if width > remaining {
        return Err(Error::InvariantViolation("face width exceeds remaining root count".into()));
    }
    if width < remaining {
        // roots hiding beyond the resolved part of column 0
        if col0_exact_zero || remaining - width != 1 {
            return Err(Error::Unresolved(
                "root count not accounted for at current truncation".into(),
            ));
        }
        // a single deep root: certified flat up to (trunc0 - ord col1)
        let trunc0 = match &b.cols[0].trunc {
            ExtRat::Fin(t) if b.cols[0].terms.is_empty() => t.clone(),
            _ => return Err(Error::Unresolved("deep root needs a flat column 0".into())),
        };
        let j1 = match b.cols.get(1).map(|c| c.ord()) {
            Some(Ok(ExtRat::Fin(j))) => j,
            _ => return Err(Error::Unresolved("column 1 unresolved for a deep root".into())),
        };
        let t = &trunc0 - &j1;
        if t <= b.last_exp {
            return Err(Error::Unresolved("deep root certificate below prefix depth".into()));
        }
        sheets.push(Sheet {
            series: prefix_series(tower, &b.prefix, ExtRat::Fin(t)),
            mult: b.mult,
            exact: false,
            source_idx: b.source_idx,
        });
        return Ok(());
    }
    for edge in &edges {
        // face polynomial in the leading coefficient, indexed from i_low
        let mut face: Vec<Rep> = vec![Rep::zero(); edge.i_high - edge.i_low + 1];
        for (i, j) in &poly.points {
            if *i < edge.i_low || *i > edge.i_high {
                continue;
            }
            let on_edge = &edge.intercept - &edge.coslope * Rat::from_integer((*i).into()) == *j;
            if on_edge {
                face[*i - edge.i_low] = b.cols[*i].leading_coeff().unwrap().clone();
            }
        }
        let (t2, roots) = all_roots(tower, &face)?;
        *tower = t2;
        for (c, mu) in roots {
            if tower.is_zero(&c)? {
                return Err(Error::InvariantViolation("zero face root".into()));
            }
            let mut prefix = b.prefix.clone();
            prefix.push((edge.coslope.clone(), c.clone()));
            let parent_cols = SeriesPoly {
                tower: tower.clone(),
                cols: b.cols.iter().map(|cl| lift_series(cl, tower)).collect(),
            };
            let shifted = parent_cols.shift(&c, &edge.coslope, None)?;
            let child = Branch {
                prefix,
                last_exp: edge.coslope.clone(),
                nroots: mu,
                mult: b.mult,
                source_idx: b.source_idx,
                cols: shifted.cols,
            };
            if child.nroots == 1 {
                // try to finish the child immediately when its next face is clean
                finish_or_queue(tower, child, sources, sources_dx, work, sheets)?;
            } else {
                work.push(child);
            }
        }
    }
    Ok(())
}

fn lift_series(s: &PuiseuxSeries, tower: &Arc<Tower>) -> PuiseuxSeries {
    PuiseuxSeries { tower: tower.clone(), terms: s.terms.clone(), trunc: s.trunc.clone() }
}

/// A single-root branch becomes a sheet as soon as its residual certifies a
/// next exponent; otherwise it queues for more polygon steps.
fn finish_or_queue(
    tower: &mut Arc<Tower>,
    b: Branch,
    _sources: &[SeriesPoly],
    _sources_dx: &[SeriesPoly],
    work: &mut Vec<Branch>,
    sheets: &mut Vec<Sheet>,
) -> Result<()> {
    let poly = NewtonPolygon::from_columns(&b.cols);
    if !poly.certified() {
        return Err(Error::Unresolved("newton polygon not certified at current cap".into()));
    }
    let col0_exact_zero = b
        .cols
        .first()
        .map_or(false, |c| c.terms.is_empty() && c.trunc.is_inf());
    if col0_exact_zero {
        sheets.push(Sheet {
            series: prefix_series(tower, &b.prefix, ExtRat::Inf),
            mult: b.mult,
            exact: true,
            source_idx: b.source_idx,
        });
        return Ok(());
    }
    // orders of S(prefix) and S'(prefix) are columns 0 and 1 of the residual
    let v0 = b.cols[0].ord();
    let v1 = b.cols.get(1).map(|c| c.ord());
    match (v0, v1) {
        (Ok(ExtRat::Fin(v0)), Some(Ok(ExtRat::Fin(v1)))) => {
            let kappa = &v0 - &v1;
            if kappa > b.last_exp {
                // certified: the root agrees with the prefix below kappa
                sheets.push(Sheet {
                    series: prefix_series(tower, &b.prefix, ExtRat::Fin(kappa)),
                    mult: b.mult,
                    exact: false,
                    source_idx: b.source_idx,
                });
                Ok(())
            } else {
                work.push(b);
                Ok(())
            }
        }
        _ => {
            // column 0 flat beyond its truncation, or column 1 unresolved:
            // fall back to the generic step
            work.push(b);
            Ok(())
        }
    }
}

// ---- conjugate orbits ----

/// An orbit of sheets under the root-of-unity action: one irreducible
/// branch of the expanded polynomial.
#[derive(Clone, Debug)]
pub struct ArcClass {
    /// index of the representative sheet
    pub rep: usize,
    /// ramification N (Puiseux multiplicity of the branch)
    pub ram: u32,
    /// multiplicity as a root
    pub mult: u32,
    /// the member sheets, k -> sheet index realizing the k-th conjugate
    pub members: Vec<usize>,
}

/// Group sheets into conjugacy orbits.  All pairwise distinctions among the
/// sheets must already be resolved at the stored truncations.
pub fn group_conjugates(tower: &mut Arc<Tower>, sheets: &[Sheet]) -> Result<Vec<ArcClass>> {
    let mut assigned = vec![false; sheets.len()];
    let mut out = Vec::new();
    for i in 0..sheets.len() {
        if assigned[i] {
            continue;
        }
        assigned[i] = true;
        let n = sheets[i].series.visible_ramification();
        if n == 1 {
            out.push(ArcClass { rep: i, ram: 1, mult: sheets[i].mult, members: vec![i] });
            continue;
        }
        let adj = tower.adjoin_root_of_unity(n)?;
        *tower = adj.tower.clone();
        let mut eps_pows = Vec::with_capacity(n as usize);
        let mut p = Rep::one();
        for _ in 0..n {
            eps_pows.push(p.clone());
            p = tower.mul(&p, &adj.root);
        }
        let rep_series = lift_series(&sheets[i].series, tower);
        let mut members = vec![i];
        for k in 1..n {
            let conj = rep_series.conjugate(n, k, &eps_pows);
            let mut found = None;
            for (j, sheet) in sheets.iter().enumerate() {
                if assigned[j] || sheet.source_idx != sheets[i].source_idx {
                    continue;
                }
                let d = conj.sub(&lift_series(&sheet.series, tower))?;
                if d.terms.is_empty() {
                    found = Some(j);
                    break;
                }
            }
            let j = found.ok_or_else(|| {
                Error::InvariantViolation(format!(
                    "conjugate {} of sheet {} not found among the sheets",
                    k, i
                ))
            })?;
            if sheets[j].mult != sheets[i].mult {
                return Err(Error::InvariantViolation(
                    "conjugate sheets with different multiplicities".into(),
                ));
            }
            assigned[j] = true;
            members.push(j);
        }
        out.push(ArcClass { rep: i, ram: n, mult: sheets[i].mult, members });
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gaussian::{rat, rat_i64, GaussianRational};
    use crate::parse::parse_germ;

    fn expand(expr: &str) -> (Arc<Tower>, Expansion) {
        let g = parse_germ(expr).unwrap();
        let mut tower = Tower::base();
        let e = Expansion::germ_roots(&mut tower, &g).unwrap();
        (tower, e)
    }

    #[test]
    fn cusp_roots() {
        let (_t, e) = expand("x^2 - y^3");
        assert_eq!(e.sheets.len(), 2);
        assert_eq!(e.total_mult, 2);
        for s in &e.sheets {
            assert_eq!(s.series.terms.len(), 1);
            assert_eq!(s.series.terms[0].0, rat(3, 2));
        }
    }

    #[test]
    fn figure_one_germ_roots() {
        let (_t, e) = expand("((x - y^2)^2 - y^6)*(x - y^3)*(x - y^4)");
        assert_eq!(e.total_mult, 4);
        assert_eq!(e.sheets.len(), 4);
        // roots: y^2 - y^3, y^2 + y^3, y^3, y^4
        let mut found = vec![false; 4];
        for s in &e.sheets {
            let lead = s.series.terms[0].clone();
            if lead.0 == rat_i64(2) {
                // second term distinguishes the pair
                let second = s.series.terms.get(1).cloned();
                match second {
                    Some((e2, c)) if e2 == rat_i64(3) => {
                        if c == Rep::from_i64(1) {
                            found[1] = true;
                        } else if c == Rep::from_i64(-1) {
                            found[0] = true;
                        }
                    }
                    _ => {}
                }
            } else if lead.0 == rat_i64(3) {
                found[2] = true;
                assert!(s.exact);
            } else if lead.0 == rat_i64(4) {
                found[3] = true;
                assert!(s.exact);
            }
        }
        assert_eq!(found, vec![true; 4]);
    }

    #[test]
    fn figure_one_polar_roots() {
        let g = parse_germ("((x - y^2)^2 - y^6)*(x - y^3)*(x - y^4)").unwrap();
        let gx = g.partial_x();
        let mut tower = Tower::base();
        let e = Expansion::germ_roots(&mut tower, &gx).unwrap();
        assert_eq!(e.total_mult, 3);
        let mut leads: Vec<(Rat, Rep)> =
            e.sheets.iter().map(|s| s.series.terms[0].clone()).collect();
        leads.sort_by(|a, b| a.0.cmp(&b.0));
        // gamma_3 = (1/2) y^2 + ..., gamma_2 = y^2 - y^4 + ..., gamma_1 = (1/2) y^3 + ...
        assert_eq!(leads[0].0, rat_i64(2));
        assert_eq!(leads[1].0, rat_i64(2));
        assert_eq!(leads[2].0, rat_i64(3));
        assert_eq!(leads[2].1, Rep::from_rat(rat(1, 2)));
        let coeffs2: Vec<&Rep> = leads[..2].iter().map(|(_, c)| c).collect();
        assert!(coeffs2.contains(&&Rep::from_rat(rat(1, 2))));
        assert!(coeffs2.contains(&&Rep::from_i64(1)));
    }

    #[test]
    fn ramified_roots_group_into_one_class() {
        let (mut t, e) = expand("x^2 - y^3");
        let classes = group_conjugates(&mut t, &e.sheets).unwrap();
        assert_eq!(classes.len(), 1);
        assert_eq!(classes[0].ram, 2);
        assert_eq!(classes[0].mult, 1);
    }

    #[test]
    fn cube_root_class() {
        let (mut t, e) = expand("x^3 - y^4");
        assert_eq!(e.sheets.len(), 3);
        let classes = group_conjugates(&mut t, &e.sheets).unwrap();
        assert_eq!(classes.len(), 1);
        assert_eq!(classes[0].ram, 3);
    }

    #[test]
    fn multiple_root_multiplicity() {
        let (_t, e) = expand("(x - y^2)^2*(x - y^3)");
        assert_eq!(e.total_mult, 3);
        assert_eq!(e.sheets.len(), 2);
        let mut mults: Vec<u32> = e.sheets.iter().map(|s| s.mult).collect();
        mults.sort();
        assert_eq!(mults, vec![1, 2]);
    }

    #[test]
    fn refinement_extends_truncation() {
        let (_t, mut e) = expand("((x - y^2)^2 - y^6)*(x - y^3)*(x - y^4)");
        // find the sheet starting with y^2 - y^3 and push it to depth 12
        let idx = e
            .sheets
            .iter()
            .position(|s| {
                s.series.terms.first().map(|(e, _)| e.clone()) == Some(rat_i64(2)) && !s.exact
            })
            .unwrap();
        e.refine_to(idx, &rat_i64(12)).unwrap();
        let s = &e.sheets[idx];
        match &s.series.trunc {
            ExtRat::Fin(t) => assert!(t >= &rat_i64(12)),
            ExtRat::Inf => {}
        }
        // the refined series must still solve its source up to the cap
        let val = e.source_eval(idx, &s.series, None).unwrap();
        match val.ord() {
            Err(_) => {}                      // order pushed beyond what is known: fine
            Ok(ExtRat::Inf) => {}             // exactly zero
            Ok(ExtRat::Fin(v)) => assert!(v >= rat_i64(12)),
        }
    }

    #[test]
    fn sum_of_mult_equals_order_for_mini_regular() {
        for expr in ["x^2 - y^3", "x^3 - y^4", "(x - y)*(x + y)*(x - 2*y)", "x^2 + 2*x*y + y^2 - x^3"] {
            let g = parse_germ(expr).unwrap();
            let m = g.mult().unwrap() as u32;
            let (_t, e) = expand(expr);
            assert_eq!(e.total_mult, m, "total multiplicity mismatch for {}", expr);
        }
    }

    #[test]
    fn example_one_roots_have_algebraic_coefficients() {
        // seven roots: 4y^4, (1 +/- i sqrt2) y^4, y^3 +/- sqrt6 y^(9/2), y^2 +/- sqrt6 y^6
        let (mut t, e) =
            expand("(x - y^2)^2*(x - y^3)^2*(x - y^4)*(x - 2*y^4)*(x - 3*y^4) - 6*y^22");
        assert_eq!(e.total_mult, 7);
        assert_eq!(e.sheets.len(), 7);
        let classes = group_conjugates(&mut t, &e.sheets).unwrap();
        assert_eq!(classes.len(), 6);
        let mut rams: Vec<u32> = classes.iter().map(|c| c.ram).collect();
        rams.sort();
        assert_eq!(rams, vec![1, 1, 1, 1, 1, 2]);
        // the ord-4 leads include the rational root 4
        let mut found_four = false;
        for s in &e.sheets {
            let (e0, c0) = &s.series.terms[0];
            if *e0 == rat_i64(4) && *c0 == Rep::from_gaussian(GaussianRational::from_i64(4)) {
                found_four = true;
            }
        }
        assert!(found_four);
    }
}
