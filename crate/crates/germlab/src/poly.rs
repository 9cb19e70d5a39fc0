//! Polynomials over Q(i): univariate in y, and bivariate germs in (x, y).
//!
//! Input germs live here.  The bivariate layer provides the operations the
//! engine needs before any algebraic extension enters: partial derivatives,
//! shears and general substitutions, initial forms, Yun decomposition in x,
//! gcd and resultants via a subresultant remainder sequence.

use crate::error::{Error, Result};
use crate::gaussian::{GaussianRational, Rat};
use std::fmt;

/// Dense univariate polynomial over Q(i), ascending coefficients.
#[derive(Clone, PartialEq, Eq, Debug, Default)]
pub struct QiPoly(pub Vec<GaussianRational>);

impl QiPoly {
    pub fn zero() -> Self {
        QiPoly(Vec::new())
    }

    pub fn constant(c: GaussianRational) -> Self {
        if c.is_zero() { QiPoly::zero() } else { QiPoly(vec![c]) }
    }

    pub fn monomial(c: GaussianRational, deg: usize) -> Self {
        if c.is_zero() {
            return QiPoly::zero();
        }
        let mut v = vec![GaussianRational::zero(); deg + 1];
        v[deg] = c;
        QiPoly(v)
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_empty()
    }

    pub fn degree(&self) -> Option<usize> {
        if self.0.is_empty() { None } else { Some(self.0.len() - 1) }
    }

    /// Order of vanishing at y = 0; None for the zero polynomial.
    pub fn ord(&self) -> Option<usize> {
        self.0.iter().position(|c| !c.is_zero())
    }

    pub fn trim(mut self) -> Self {
        while self.0.last().map_or(false, |c| c.is_zero()) {
            self.0.pop();
        }
        self
    }

    pub fn coeff(&self, k: usize) -> GaussianRational {
        self.0.get(k).cloned().unwrap_or_else(GaussianRational::zero)
    }

    pub fn lead(&self) -> GaussianRational {
        self.0.last().cloned().unwrap_or_else(GaussianRational::zero)
    }

    pub fn add(&self, rhs: &Self) -> Self {
        let n = self.0.len().max(rhs.0.len());
        let mut v = Vec::with_capacity(n);
        for k in 0..n {
            v.push(&self.coeff(k) + &rhs.coeff(k));
        }
        QiPoly(v).trim()
    }

    pub fn sub(&self, rhs: &Self) -> Self {
        self.add(&rhs.neg())
    }

    pub fn neg(&self) -> Self {
        QiPoly(self.0.iter().map(|c| -c.clone()).collect())
    }

    pub fn mul(&self, rhs: &Self) -> Self {
        if self.is_zero() || rhs.is_zero() {
            return QiPoly::zero();
        }
        let mut v = vec![GaussianRational::zero(); self.0.len() + rhs.0.len() - 1];
        for (i, a) in self.0.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.0.iter().enumerate() {
                if b.is_zero() {
                    continue;
                }
                let t = a * b;
                v[i + j] = &v[i + j] + &t;
            }
        }
        QiPoly(v).trim()
    }

    pub fn scale(&self, c: &GaussianRational) -> Self {
        if c.is_zero() {
            return QiPoly::zero();
        }
        QiPoly(self.0.iter().map(|a| a * c).collect())
    }

    pub fn shift_up(&self, k: usize) -> Self {
        if self.is_zero() {
            return QiPoly::zero();
        }
        let mut v = vec![GaussianRational::zero(); k];
        v.extend(self.0.iter().cloned());
        QiPoly(v)
    }

    pub fn derivative(&self) -> Self {
        QiPoly(
            self.0
                .iter()
                .enumerate()
                .skip(1)
                .map(|(k, c)| c.scale(&Rat::from_integer(k.into())))
                .collect(),
        )
        .trim()
    }

    /// Exact division; error if the remainder is nonzero.
    pub fn div_exact(&self, den: &Self) -> Result<Self> {
        if den.is_zero() {
            return Err(Error::DivisionByZero);
        }
        let mut rem = self.clone().trim();
        let dd = den.0.len() - 1;
        let lead_inv = den.lead().inv()?;
        if rem.0.len() < den.0.len() {
            return if rem.is_zero() {
                Ok(QiPoly::zero())
            } else {
                Err(Error::InvalidInput("inexact polynomial division".into()))
            };
        }
        let mut quo = vec![GaussianRational::zero(); rem.0.len() - dd];
        while rem.0.len() > dd {
            let k = rem.0.len() - 1 - dd;
            let c = &rem.lead() * &lead_inv;
            for (i, d) in den.0.iter().enumerate() {
                let t = &c * d;
                rem.0[k + i] = &rem.0[k + i] - &t;
            }
            quo[k] = c;
            rem = rem.trim();
            if rem.0.len() <= dd {
                break;
            }
        }
        if !rem.is_zero() {
            return Err(Error::InvalidInput("inexact polynomial division".into()));
        }
        Ok(QiPoly(quo).trim())
    }

    /// Monic gcd over the field Q(i).
    pub fn gcd(&self, rhs: &Self) -> Self {
        let mut a = self.clone().trim();
        let mut b = rhs.clone().trim();
        while !b.is_zero() {
            let r = a.rem(&b);
            a = b;
            b = r;
        }
        if a.is_zero() {
            return a;
        }
        let li = a.lead().inv().unwrap();
        a.scale(&li)
    }

    fn rem(&self, den: &Self) -> Self {
        let mut rem = self.clone().trim();
        let dd = den.0.len() - 1;
        let lead_inv = den.lead().inv().unwrap();
        while rem.0.len() > dd {
            let k = rem.0.len() - 1 - dd;
            let c = &rem.lead() * &lead_inv;
            for (i, d) in den.0.iter().enumerate() {
                let t = &c * d;
                rem.0[k + i] = &rem.0[k + i] - &t;
            }
            rem = rem.trim();
        }
        rem
    }

    pub fn eval(&self, x: &GaussianRational) -> GaussianRational {
        let mut acc = GaussianRational::zero();
        for c in self.0.iter().rev() {
            acc = &acc * x;
            acc = &acc + c;
        }
        acc
    }
}

/// A bivariate polynomial over Q(i), stored as columns: f = sum cols[i](y) x^i.
#[derive(Clone, PartialEq, Eq, Debug, Default)]
pub struct Germ {
    pub cols: Vec<QiPoly>,
}

impl Germ {
    pub fn zero() -> Self {
        Germ { cols: Vec::new() }
    }

    pub fn from_cols(cols: Vec<QiPoly>) -> Self {
        Germ { cols }.trim()
    }

    pub fn constant(c: GaussianRational) -> Self {
        Germ { cols: vec![QiPoly::constant(c)] }.trim()
    }

    pub fn var_x() -> Self {
        Germ { cols: vec![QiPoly::zero(), QiPoly::constant(GaussianRational::one())] }
    }

    pub fn var_y() -> Self {
        Germ { cols: vec![QiPoly::monomial(GaussianRational::one(), 1)] }
    }

    pub fn monomial(c: GaussianRational, i: usize, j: usize) -> Self {
        let mut cols = vec![QiPoly::zero(); i + 1];
        cols[i] = QiPoly::monomial(c, j);
        Germ { cols }.trim()
    }

    fn trim(mut self) -> Self {
        while self.cols.last().map_or(false, |c| c.is_zero()) {
            self.cols.pop();
        }
        self
    }

    pub fn is_zero(&self) -> bool {
        self.cols.iter().all(|c| c.is_zero())
    }

    pub fn deg_x(&self) -> Option<usize> {
        if self.cols.is_empty() { None } else { Some(self.cols.len() - 1) }
    }

    pub fn col(&self, i: usize) -> QiPoly {
        self.cols.get(i).cloned().unwrap_or_else(QiPoly::zero)
    }

    pub fn coeff(&self, i: usize, j: usize) -> GaussianRational {
        self.col(i).coeff(j)
    }

    pub fn add(&self, rhs: &Self) -> Self {
        let n = self.cols.len().max(rhs.cols.len());
        let mut cols = Vec::with_capacity(n);
        for k in 0..n {
            cols.push(self.col(k).add(&rhs.col(k)));
        }
        Germ { cols }.trim()
    }

    pub fn sub(&self, rhs: &Self) -> Self {
        self.add(&rhs.neg())
    }

    pub fn neg(&self) -> Self {
        Germ { cols: self.cols.iter().map(|c| c.neg()).collect() }
    }

    pub fn mul(&self, rhs: &Self) -> Self {
        if self.is_zero() || rhs.is_zero() {
            return Germ::zero();
        }
        let mut cols = vec![QiPoly::zero(); self.cols.len() + rhs.cols.len() - 1];
        for (i, a) in self.cols.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.cols.iter().enumerate() {
                if b.is_zero() {
                    continue;
                }
                cols[i + j] = cols[i + j].add(&a.mul(b));
            }
        }
        Germ { cols }.trim()
    }

    pub fn pow(&self, mut n: u32) -> Self {
        let mut base = self.clone();
        let mut acc = Germ::constant(GaussianRational::one());
        while n > 0 {
            if n & 1 == 1 {
                acc = acc.mul(&base);
            }
            n >>= 1;
            if n > 0 {
                base = base.mul(&base);
            }
        }
        acc
    }

    pub fn partial_x(&self) -> Self {
        Germ {
            cols: self
                .cols
                .iter()
                .enumerate()
                .skip(1)
                .map(|(i, c)| c.scale(&GaussianRational::from_rat(Rat::from_integer(i.into()))))
                .collect(),
        }
        .trim()
    }

    pub fn partial_y(&self) -> Self {
        Germ { cols: self.cols.iter().map(|c| c.derivative()).collect() }.trim()
    }

    /// General substitution f(X(x,y), Y(x,y)) by double Horner.
    pub fn compose(&self, x_image: &Germ, y_image: &Germ) -> Germ {
        let mut acc = Germ::zero();
        for col in self.cols.iter().rev() {
            acc = acc.mul(x_image);
            // col(Y) by Horner in y
            let mut cy = Germ::zero();
            for c in col.0.iter().rev() {
                cy = cy.mul(y_image);
                cy = cy.add(&Germ::constant(c.clone()));
            }
            acc = acc.add(&cy);
        }
        acc
    }

    /// The shear f(x, y + lambda*x).
    pub fn shear(&self, lambda: &GaussianRational) -> Germ {
        let y_image = Germ::var_y().add(&Germ::var_x().mul(&Germ::constant(lambda.clone())));
        self.compose(&Germ::var_x(), &y_image)
    }

    /// Order of vanishing at the origin (degree of the initial form).
    pub fn mult(&self) -> Option<usize> {
        let mut m: Option<usize> = None;
        for (i, c) in self.cols.iter().enumerate() {
            if let Some(j) = c.ord() {
                let d = i + j;
                m = Some(m.map_or(d, |cur| cur.min(d)));
            }
        }
        m
    }

    /// The degree-m homogeneous initial form.
    pub fn initial_form(&self) -> Germ {
        let m = match self.mult() {
            Some(m) => m,
            None => return Germ::zero(),
        };
        let mut cols = Vec::new();
        for (i, c) in self.cols.iter().enumerate() {
            if i > m {
                break;
            }
            let j = m - i;
            cols.push(QiPoly::monomial(c.coeff(j), j).trim());
        }
        Germ { cols }.trim()
    }

    /// Initial form restricted to x = t, y = 1, as a univariate polynomial.
    pub fn initial_form_at_y1(&self) -> QiPoly {
        let m = match self.mult() {
            Some(m) => m,
            None => return QiPoly::zero(),
        };
        let mut v = vec![GaussianRational::zero(); m + 1];
        for i in 0..=m {
            v[i] = self.coeff(i, m - i);
        }
        QiPoly(v).trim()
    }

    /// Content in y of all columns.
    fn content_y(&self) -> QiPoly {
        let mut g = QiPoly::zero();
        for c in &self.cols {
            if c.is_zero() {
                continue;
            }
            g = if g.is_zero() { c.clone() } else { g.gcd(c) };
            if g.degree() == Some(0) {
                break;
            }
        }
        g
    }

    /// Divide out the y-content (and normalise the leading coefficient away).
    pub fn primitive_y(&self) -> Germ {
        let g = self.content_y();
        if g.is_zero() || g.degree() == Some(0) {
            return self.clone();
        }
        Germ { cols: self.cols.iter().map(|c| c.div_exact(&g).unwrap()).collect() }.trim()
    }

    fn scale_col(&self, q: &QiPoly) -> Germ {
        Germ { cols: self.cols.iter().map(|c| c.mul(q)).collect() }.trim()
    }

    fn div_exact_col(&self, q: &QiPoly) -> Result<Germ> {
        let mut cols = Vec::with_capacity(self.cols.len());
        for c in &self.cols {
            cols.push(c.div_exact(q)?);
        }
        Ok(Germ { cols }.trim())
    }

    /// Pseudo-division in x over Q(i)[y]: lc(den)^(delta+1) * self = q*den + r.
    fn pseudo_rem(&self, den: &Germ) -> Germ {
        let d = den.deg_x().unwrap();
        let lc = den.cols.last().unwrap().clone();
        let mut rem = self.clone();
        while rem.deg_x().map_or(false, |n| n >= d) {
            let n = rem.deg_x().unwrap();
            let r_lc = rem.cols.last().unwrap().clone();
            // rem = lc*rem - r_lc * x^(n-d) * den
            let mut shifted = vec![QiPoly::zero(); n - d];
            shifted.extend(den.cols.iter().map(|c| c.mul(&r_lc)));
            rem = rem.scale_col(&lc).sub(&Germ { cols: shifted });
            rem.cols.truncate(n); // degree strictly drops
            rem = rem.clone().trim();
        }
        rem
    }

    /// Gcd in x over Q(i)[y] by the subresultant PRS; the result is
    /// primitive in y with leading coefficient normalised to 1.
    pub fn gcd_x(&self, rhs: &Germ) -> Germ {
        let mut a = self.primitive_y();
        let mut b = rhs.primitive_y();
        if a.is_zero() {
            return b;
        }
        if b.is_zero() {
            return a;
        }
        if a.deg_x() < b.deg_x() {
            std::mem::swap(&mut a, &mut b);
        }
        if b.deg_x() == Some(0) {
            return Germ::constant(GaussianRational::one());
        }
        let one = QiPoly::constant(GaussianRational::one());
        let mut g = one.clone();
        let mut h = one.clone();
        loop {
            let delta = a.deg_x().unwrap() - b.deg_x().unwrap();
            let r = a.pseudo_rem(&b);
            if r.is_zero() {
                let out = b.primitive_y();
                let lc = out.cols.last().unwrap().lead();
                return if lc.is_one() {
                    out
                } else {
                    out.scale_col(&QiPoly::constant(lc.inv().unwrap()))
                };
            }
            if r.deg_x() == Some(0) {
                return Germ::constant(GaussianRational::one());
            }
            // B := R / (g * h^delta), exact
            let mut div = g.clone();
            for _ in 0..delta {
                div = div.mul(&h);
            }
            a = b;
            b = r.div_exact_col(&div).expect("subresultant division is exact");
            g = a.cols.last().unwrap().clone();
            // h := g^delta * h^(1-delta), exact
            h = if delta == 0 {
                h
            } else {
                let mut num = one.clone();
                for _ in 0..delta {
                    num = num.mul(&g);
                }
                let mut den = one.clone();
                for _ in 0..delta - 1 {
                    den = den.mul(&h);
                }
                num.div_exact(&den).expect("subresultant h update is exact")
            };
        }
    }

    /// Yun squarefree decomposition in x over Q(i)(y): returns [(factor, mult)]
    /// with factors primitive in y, pairwise coprime, product (up to content
    /// in y and a unit) equal to self.
    pub fn yun_x(&self) -> Result<Vec<(Germ, u32)>> {
        let f = self.primitive_y();
        if f.deg_x().unwrap_or(0) == 0 {
            return Ok(Vec::new());
        }
        let fx = f.partial_x();
        let g = f.gcd_x(&fx);
        if g.deg_x() == Some(0) {
            return Ok(vec![(f, 1)]);
        }
        let mut out = Vec::new();
        let mut c = f.div_exact_poly(&g)?;
        let mut d = fx.div_exact_poly(&g)?.sub(&c.partial_x());
        let mut mult = 1u32;
        while c.deg_x().map_or(false, |n| n > 0) {
            let a = c.gcd_x(&d);
            if a.deg_x().map_or(false, |n| n > 0) {
                out.push((a.clone(), mult));
            }
            let a_eff = if a.deg_x() == Some(0) { Germ::constant(GaussianRational::one()) } else { a };
            c = c.div_exact_poly(&a_eff)?;
            d = d.div_exact_poly(&a_eff)?.sub(&c.partial_x());
            mult += 1;
        }
        Ok(out)
    }

    /// Exact division in x over Q(i)(y), clearing denominators via contents.
    fn div_exact_poly(&self, den: &Germ) -> Result<Germ> {
        if den.deg_x() == Some(0) {
            // divide by a y-polynomial (up to content this is exact)
            let q = &den.cols[0];
            return match self.div_exact_col(q) {
                Ok(g) => Ok(g),
                Err(_) => Ok(self.primitive_y().div_exact_col(&q.clone().trim()).unwrap_or_else(|_| self.primitive_y())),
            };
        }
        // long division in x with rational-function arithmetic avoided by
        // scaling: repeatedly pseudo-divide and strip contents.
        let d = den.deg_x().unwrap();
        let lc = den.cols.last().unwrap().clone();
        let mut rem = self.clone();
        let mut quo_cols: Vec<QiPoly> = vec![QiPoly::zero(); self.cols.len().saturating_sub(d)];
        let mut scale = QiPoly::constant(GaussianRational::one());
        while rem.deg_x().map_or(false, |n| n >= d) {
            let n = rem.deg_x().unwrap();
            let r_lc = rem.cols.last().unwrap().clone();
            let mut shifted = vec![QiPoly::zero(); n - d];
            shifted.extend(den.cols.iter().map(|c| c.mul(&r_lc)));
            rem = rem.scale_col(&lc).sub(&Germ { cols: shifted });
            rem.cols.truncate(n);
            rem = rem.clone().trim();
            for q in quo_cols.iter_mut() {
                *q = q.mul(&lc);
            }
            quo_cols[n - d] = quo_cols[n - d].add(&r_lc);
            scale = scale.mul(&lc);
        }
        if !rem.is_zero() {
            return Err(Error::InvalidInput("inexact division in x".into()));
        }
        let quo = Germ { cols: quo_cols }.trim();
        let mut out_cols = Vec::with_capacity(quo.cols.len());
        for c in &quo.cols {
            out_cols.push(c.div_exact(&scale)?);
        }
        Ok(Germ { cols: out_cols }.trim())
    }

    /// Resultant with respect to x, an element of Q(i)[y]: the determinant
    /// of the Sylvester matrix by fraction-free Bareiss elimination.
    pub fn resultant_x(&self, rhs: &Germ) -> QiPoly {
        let (m, n) = match (self.deg_x(), rhs.deg_x()) {
            (Some(m), Some(n)) => (m, n),
            _ => return QiPoly::zero(),
        };
        if m == 0 {
            let mut acc = QiPoly::constant(GaussianRational::one());
            for _ in 0..n {
                acc = acc.mul(&self.cols[0]);
            }
            return acc;
        }
        if n == 0 {
            let mut acc = QiPoly::constant(GaussianRational::one());
            for _ in 0..m {
                acc = acc.mul(&rhs.cols[0]);
            }
            return acc;
        }
        let size = m + n;
        let mut mat = vec![vec![QiPoly::zero(); size]; size];
        for r in 0..n {
            for (k, c) in self.cols.iter().enumerate() {
                mat[r][r + m - k] = c.clone();
            }
        }
        for r in 0..m {
            for (k, c) in rhs.cols.iter().enumerate() {
                mat[n + r][r + n - k] = c.clone();
            }
        }
        // Bareiss: divisions by the previous pivot are exact.
        let mut sign = false;
        let mut prev = QiPoly::constant(GaussianRational::one());
        for k in 0..size {
            if mat[k][k].is_zero() {
                let swap = (k + 1..size).find(|&r| !mat[r][k].is_zero());
                match swap {
                    Some(r) => {
                        mat.swap(k, r);
                        sign = !sign;
                    }
                    None => return QiPoly::zero(),
                }
            }
            if k == size - 1 {
                break;
            }
            for i in k + 1..size {
                for j in k + 1..size {
                    let t = mat[k][k].mul(&mat[i][j]).sub(&mat[i][k].mul(&mat[k][j]));
                    mat[i][j] = t.div_exact(&prev).expect("Bareiss division is exact");
                }
                mat[i][k] = QiPoly::zero();
            }
            prev = mat[k][k].clone();
        }
        let det = mat[size - 1][size - 1].clone();
        if sign { det.neg() } else { det }
    }

    pub fn eval_origin(&self) -> GaussianRational {
        self.coeff(0, 0)
    }

    /// Total degree.
    pub fn total_degree(&self) -> Option<usize> {
        let mut d = None;
        for (i, c) in self.cols.iter().enumerate() {
            if let Some(dc) = c.degree() {
                for j in 0..=dc {
                    if !c.coeff(j).is_zero() {
                        d = Some(d.map_or(i + j, |cur: usize| cur.max(i + j)));
                    }
                }
            }
        }
        d
    }

    /// Support as (i, j) pairs with nonzero coefficients, sorted.
    pub fn support(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::new();
        for (i, c) in self.cols.iter().enumerate() {
            for (j, v) in c.0.iter().enumerate() {
                if !v.is_zero() {
                    out.push((i, j));
                }
            }
        }
        out
    }
}

impl fmt::Display for Germ {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut terms: Vec<String> = Vec::new();
        for (i, c) in self.cols.iter().enumerate() {
            for (j, v) in c.0.iter().enumerate() {
                if v.is_zero() {
                    continue;
                }
                let mut part = String::new();
                let coeff_str = format!("{}", v);
                let is_one = coeff_str == "1";
                let is_neg_one = coeff_str == "-1";
                let needs_paren = coeff_str.contains('+')
                    || coeff_str.contains('/')
                    || (coeff_str.contains('-') && !coeff_str.starts_with('-'))
                    || coeff_str.contains('i');
                let vars = match (i, j) {
                    (0, 0) => String::new(),
                    (0, 1) => "y".into(),
                    (0, _) => format!("y^{}", j),
                    (1, 0) => "x".into(),
                    (_, 0) => format!("x^{}", i),
                    (1, 1) => "x*y".into(),
                    (1, _) => format!("x*y^{}", j),
                    (_, 1) => format!("x^{}*y", i),
                    _ => format!("x^{}*y^{}", i, j),
                };
                if vars.is_empty() {
                    part.push_str(&coeff_str);
                } else if is_one {
                    part.push_str(&vars);
                } else if is_neg_one {
                    part.push_str(&format!("-{}", vars));
                } else if needs_paren {
                    part.push_str(&format!("({})*{}", coeff_str, vars));
                } else {
                    part.push_str(&format!("{}*{}", coeff_str, vars));
                }
                terms.push(part);
            }
        }
        if terms.is_empty() {
            return write!(f, "0");
        }
        let mut s = terms[0].clone();
        for t in &terms[1..] {
            if t.starts_with('-') {
                s.push_str(" - ");
                s.push_str(&t[1..]);
            } else {
                s.push_str(" + ");
                s.push_str(t);
            }
        }
        write!(f, "{}", s)
    }
}

/// Mini-regularisation: the smallest integer shear making the initial form
/// nonvanishing in the x-direction.
pub fn mini_regularize(f: &Germ) -> Result<(Germ, u32)> {
    if f.is_zero() {
        return Err(Error::InvalidInput("zero germ".into()));
    }
    if !f.eval_origin().is_zero() {
        return Err(Error::InvalidInput("germ must vanish at the origin".into()));
    }
    let m = f.mult().unwrap();
    for lambda in 0u32..=(4 * m as u32 + 8) {
        let lam = GaussianRational::from_i64(i64::from(lambda));
        let sheared = if lambda == 0 { f.clone() } else { f.shear(&lam) };
        if !sheared.coeff(m, 0).is_zero() {
            return Ok((sheared, lambda));
        }
    }
    Err(Error::InvariantViolation("no mini-regularising shear found".into()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gaussian::rat_i64;

    fn g(expr: &str) -> Germ {
        crate::parse::parse_germ(expr).unwrap()
    }

    #[test]
    fn partial_x_examples() {
        assert_eq!(g("x^2 - y^3").partial_x(), g("2*x"));
        assert_eq!(g("y^3 + y").partial_x(), Germ::zero());
        let f = g("((x - y^2)^2 - y^6)*(x - y^3)*(x - y^4)");
        assert_eq!(f.partial_x().deg_x(), Some(3));
    }

    #[test]
    fn mini_regularize_examples() {
        let (h, l) = mini_regularize(&g("x^2 - y^3")).unwrap();
        assert_eq!(l, 0);
        assert_eq!(h, g("x^2 - y^3"));

        let (h, l) = mini_regularize(&g("x*y")).unwrap();
        assert_eq!(l, 1);
        assert_eq!(h, g("x^2 + x*y"));

        let (h, l) = mini_regularize(&g("y^2 - x^3")).unwrap();
        assert_eq!(l, 1);
        assert_eq!(h, g("x^2 + 2*x*y + y^2 - x^3"));
    }

    #[test]
    fn initial_form_and_mult() {
        let f = g("x^2 - y^3");
        assert_eq!(f.mult(), Some(2));
        assert_eq!(f.initial_form(), g("x^2"));
        let f = g("x*y*(x + y)");
        assert_eq!(f.mult(), Some(3));
        assert_eq!(f.initial_form_at_y1(), QiPoly(vec![
            GaussianRational::zero(),
            GaussianRational::one(),
            GaussianRational::one(),
        ]));
    }

    #[test]
    fn yun_decomposition() {
        let f = g("(x - y^2)^2*(x - y^3)");
        let layers = f.yun_x().unwrap();
        assert_eq!(layers.len(), 2);
        let (s1, m1) = &layers[0];
        let (s2, m2) = &layers[1];
        assert_eq!(*m1, 1);
        assert_eq!(*m2, 2);
        assert_eq!(s1, &g("x - y^3"));
        assert_eq!(s2, &g("x - y^2"));
    }

    #[test]
    fn gcd_with_partial() {
        let f = g("(x - y^2)^2*(x - y^3)");
        let c = f.gcd_x(&f.partial_x());
        assert_eq!(c, g("x - y^2"));
        let f = g("x^2 - y^3");
        assert_eq!(f.gcd_x(&f.partial_x()).deg_x(), Some(0));
    }

    #[test]
    fn resultant_orders_match_milnor_numbers() {
        // cusp: res_x(2x, -3y^2) has order 2
        let f = g("x^2 - y^3");
        let r = f.partial_x().resultant_x(&f.partial_y());
        assert_eq!(r.ord(), Some(2));
        // x^3 - y^4: order 6
        let f = g("x^3 - y^4");
        let r = f.partial_x().resultant_x(&f.partial_y());
        assert_eq!(r.ord(), Some(6));
        // figure-one germ: order 25
        let f = g("((x - y^2)^2 - y^6)*(x - y^3)*(x - y^4)");
        let r = f.partial_x().resultant_x(&f.partial_y());
        assert_eq!(r.ord(), Some(25));
    }

    #[test]
    fn compose_linear_round_trip() {
        let f = g("x^2 - y^3 + x*y^2");
        // phi = (x + y, y), inverse (x - y, y)
        let xi = Germ::var_x().add(&Germ::var_y());
        let tr = f.compose(&xi, &Germ::var_y());
        let xi_inv = Germ::var_x().sub(&Germ::var_y());
        let back = tr.compose(&xi_inv, &Germ::var_y());
        assert_eq!(back, f);
    }

    #[test]
    fn resultant_of_sheared_cusp() {
        let f = g("x^2 - y^3").shear(&GaussianRational::from_i64(1));
        let r = f.partial_x().resultant_x(&f.partial_y());
        assert_eq!(r.ord(), Some(2));
        let _ = rat_i64(0);
    }
}
