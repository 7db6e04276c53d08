use std::cmp::Ordering;
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::vars::Vars;

pub type Rat = BigRational;

pub fn rat_int(n: i64) -> Rat {
    Rat::from_integer(BigInt::from(n))
}

pub fn rat(num: i64, den: i64) -> Rat {
    Rat::new(BigInt::from(num), BigInt::from(den))
}

/// One monomial with its coefficient. `exps[i]` is the exponent of variable
/// `i`; the vector always has the chart's full length.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Term {
    pub exps: Vec<u16>,
    pub coef: Rat,
}

/// Graded-lexicographic order: total degree first, then earlier variables
/// dominate ties.
pub fn grlex(a: &[u16], b: &[u16]) -> Ordering {
    let da: u64 = a.iter().map(|&e| e as u64).sum();
    let db: u64 = b.iter().map(|&e| e as u64).sum();
    da.cmp(&db).then_with(|| a.cmp(b))
}

/// Multivariate polynomial over exact rationals.
///
/// Canonical form: terms sorted in descending graded-lex order, no zero
/// coefficients, every exponent vector the full chart length. Equality is
/// structural equality of canonical forms, so `is_zero` is a decision
/// procedure rather than a heuristic.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Polynomial {
    vars: Vars,
    terms: Vec<Term>,
}

impl Polynomial {
    pub fn zero(vars: &Vars) -> Self {
        Polynomial {
            vars: vars.clone(),
            terms: Vec::new(),
        }
    }

    pub fn constant(vars: &Vars, c: Rat) -> Self {
        if c.is_zero() {
            return Self::zero(vars);
        }
        let exps = vec![0u16; vars.len()];
        Polynomial {
            vars: vars.clone(),
            terms: vec![Term { exps, coef: c }],
        }
    }

    pub fn one(vars: &Vars) -> Self {
        Self::constant(vars, Rat::one())
    }

    pub fn int(vars: &Vars, n: i64) -> Self {
        Self::constant(vars, rat_int(n))
    }

    pub fn variable(vars: &Vars, idx: usize) -> Self {
        assert!(idx < vars.len(), "variable index out of range");
        let mut exps = vec![0u16; vars.len()];
        exps[idx] = 1;
        Polynomial {
            vars: vars.clone(),
            terms: vec![Term {
                exps,
                coef: Rat::one(),
            }],
        }
    }

    pub fn from_terms(vars: &Vars, terms: Vec<Term>) -> Self {
        let mut p = Polynomial {
            vars: vars.clone(),
            terms,
        };
        p.normalize();
        p
    }

    fn normalize(&mut self) {
        for t in &self.terms {
            assert_eq!(
                t.exps.len(),
                self.vars.len(),
                "exponent vector length mismatch"
            );
        }
        self.terms.sort_by(|a, b| grlex(&b.exps, &a.exps));
        let mut out: Vec<Term> = Vec::with_capacity(self.terms.len());
        for t in self.terms.drain(..) {
            match out.last_mut() {
                Some(last) if last.exps == t.exps => last.coef += t.coef,
                _ => out.push(t),
            }
        }
        out.retain(|t| !t.coef.is_zero());
        self.terms = out;
    }

    pub fn vars(&self) -> &Vars {
        &self.vars
    }

    pub fn terms(&self) -> &[Term] {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.as_constant().map_or(false, |c| c.is_one())
    }

    pub fn is_constant(&self) -> bool {
        self.as_constant().is_some()
    }

    pub fn as_constant(&self) -> Option<Rat> {
        match self.terms.len() {
            0 => Some(Rat::zero()),
            1 if self.terms[0].exps.iter().all(|&e| e == 0) => Some(self.terms[0].coef.clone()),
            _ => None,
        }
    }

    pub fn lead_term(&self) -> Option<&Term> {
        self.terms.first()
    }

    pub fn total_degree(&self) -> u32 {
        self.terms
            .iter()
            .map(|t| t.exps.iter().map(|&e| e as u32).sum())
            .max()
            .unwrap_or(0)
    }

    pub fn degree_in(&self, idx: usize) -> u16 {
        self.terms.iter().map(|t| t.exps[idx]).max().unwrap_or(0)
    }

    fn check_vars(&self, rhs: &Polynomial) {
        assert!(
            self.vars.same(&rhs.vars),
            "polynomials on different variable lists"
        );
    }

    pub fn add(&self, rhs: &Polynomial) -> Polynomial {
        self.check_vars(rhs);
        if self.is_zero() {
            return rhs.clone();
        }
        if rhs.is_zero() {
            return self.clone();
        }
        // Merge of two canonically sorted term lists.
        let mut out: Vec<Term> = Vec::with_capacity(self.terms.len() + rhs.terms.len());
        let (mut i, mut j) = (0, 0);
        while i < self.terms.len() && j < rhs.terms.len() {
            let a = &self.terms[i];
            let b = &rhs.terms[j];
            match grlex(&a.exps, &b.exps) {
                Ordering::Greater => {
                    out.push(a.clone());
                    i += 1;
                }
                Ordering::Less => {
                    out.push(b.clone());
                    j += 1;
                }
                Ordering::Equal => {
                    let c = &a.coef + &b.coef;
                    if !c.is_zero() {
                        out.push(Term {
                            exps: a.exps.clone(),
                            coef: c,
                        });
                    }
                    i += 1;
                    j += 1;
                }
            }
        }
        out.extend_from_slice(&self.terms[i..]);
        out.extend_from_slice(&rhs.terms[j..]);
        Polynomial {
            vars: self.vars.clone(),
            terms: out,
        }
    }

    pub fn neg(&self) -> Polynomial {
        let terms = self
            .terms
            .iter()
            .map(|t| Term {
                exps: t.exps.clone(),
                coef: -t.coef.clone(),
            })
            .collect();
        Polynomial {
            vars: self.vars.clone(),
            terms,
        }
    }

    pub fn sub(&self, rhs: &Polynomial) -> Polynomial {
        self.add(&rhs.neg())
    }

    pub fn scale(&self, c: &Rat) -> Polynomial {
        if c.is_zero() {
            return Self::zero(&self.vars);
        }
        let terms = self
            .terms
            .iter()
            .map(|t| Term {
                exps: t.exps.clone(),
                coef: &t.coef * c,
            })
            .collect();
        Polynomial {
            vars: self.vars.clone(),
            terms,
        }
    }

    pub fn mul_term(&self, m: &Term) -> Polynomial {
        if m.coef.is_zero() {
            return Self::zero(&self.vars);
        }
        let terms = self
            .terms
            .iter()
            .map(|t| {
                let exps = t
                    .exps
                    .iter()
                    .zip(&m.exps)
                    .map(|(&a, &b)| a.checked_add(b).expect("monomial exponent overflow"))
                    .collect();
                Term {
                    exps,
                    coef: &t.coef * &m.coef,
                }
            })
            .collect();
        Polynomial {
            vars: self.vars.clone(),
            terms,
        }
    }

    pub fn mul(&self, rhs: &Polynomial) -> Polynomial {
        self.check_vars(rhs);
        if self.is_zero() || rhs.is_zero() {
            return Self::zero(&self.vars);
        }
        if let Some(c) = self.as_constant() {
            return rhs.scale(&c);
        }
        if let Some(c) = rhs.as_constant() {
            return self.scale(&c);
        }
        let (small, big) = if self.terms.len() <= rhs.terms.len() {
            (self, rhs)
        } else {
            (rhs, self)
        };
        let mut acc = Self::zero(&self.vars);
        for m in &small.terms {
            acc = acc.add(&big.mul_term(m));
        }
        acc
    }

    pub fn pow(&self, k: u32) -> Polynomial {
        let mut acc = Self::one(&self.vars);
        for _ in 0..k {
            acc = acc.mul(self);
        }
        acc
    }

    pub fn derivative(&self, idx: usize) -> Polynomial {
        assert!(idx < self.vars.len(), "variable index out of range");
        let terms: Vec<Term> = self
            .terms
            .iter()
            .filter(|t| t.exps[idx] > 0)
            .map(|t| {
                let mut exps = t.exps.clone();
                exps[idx] -= 1;
                Term {
                    exps,
                    coef: &t.coef * rat_int(t.exps[idx] as i64),
                }
            })
            .collect();
        // Decrementing one fixed variable preserves the descending graded-lex
        // order of the surviving terms.
        Polynomial {
            vars: self.vars.clone(),
            terms,
        }
    }

    pub fn eval(&self, point: &[Rat]) -> Rat {
        assert_eq!(
            point.len(),
            self.vars.len(),
            "evaluation point has wrong dimension"
        );
        let mut powers: Vec<Vec<Rat>> = Vec::with_capacity(point.len());
        for (i, x) in point.iter().enumerate() {
            let d = self.degree_in(i) as usize;
            let mut col = Vec::with_capacity(d + 1);
            col.push(Rat::one());
            for k in 1..=d {
                let prev = col[k - 1].clone();
                col.push(prev * x);
            }
            powers.push(col);
        }
        let mut acc = Rat::zero();
        for t in &self.terms {
            let mut m = t.coef.clone();
            for (i, &e) in t.exps.iter().enumerate() {
                if e > 0 {
                    m *= &powers[i][e as usize];
                }
            }
            acc += m;
        }
        acc
    }

    pub fn eval_f64(&self, point: &[f64]) -> f64 {
        assert_eq!(
            point.len(),
            self.vars.len(),
            "evaluation point has wrong dimension"
        );
        let mut acc = 0.0;
        for t in &self.terms {
            let mut m = t.coef.to_f64().unwrap_or(f64::NAN);
            for (i, &e) in t.exps.iter().enumerate() {
                if e > 0 {
                    m *= point[i].powi(e as i32);
                }
            }
            acc += m;
        }
        acc
    }

    /// Signed rational content: `self == content * p` with `p` an
    /// integer-coefficient polynomial of content one whose graded-lex leading
    /// coefficient is positive. Zero for the zero polynomial.
    pub fn signed_content(&self) -> Rat {
        if self.is_zero() {
            return Rat::zero();
        }
        let mut num_gcd = BigInt::zero();
        let mut den_lcm = BigInt::one();
        for t in &self.terms {
            num_gcd = num_gcd.gcd(t.coef.numer());
            den_lcm = den_lcm.lcm(t.coef.denom());
        }
        let mut c = Rat::new(num_gcd, den_lcm);
        if self.terms[0].coef.is_negative() {
            c = -c;
        }
        c
    }

    /// Integer-primitive form with positive leading coefficient. The zero
    /// polynomial maps to itself.
    pub fn int_primitive(&self) -> Polynomial {
        if self.is_zero() {
            return self.clone();
        }
        let c = self.signed_content();
        self.scale(&c.recip())
    }

    /// Componentwise minimum exponent vector (the monomial content).
    pub fn min_exps(&self) -> Vec<u16> {
        let n = self.vars.len();
        let mut m = vec![u16::MAX; n];
        for t in &self.terms {
            for (mi, &e) in m.iter_mut().zip(&t.exps) {
                *mi = (*mi).min(e);
            }
        }
        if self.terms.is_empty() {
            m.fill(0);
        }
        m
    }

    pub fn div_monomial(&self, exps: &[u16]) -> Polynomial {
        let terms = self
            .terms
            .iter()
            .map(|t| {
                let e = t
                    .exps
                    .iter()
                    .zip(exps)
                    .map(|(&a, &b)| a.checked_sub(b).expect("monomial does not divide term"))
                    .collect();
                Term {
                    exps: e,
                    coef: t.coef.clone(),
                }
            })
            .collect();
        Polynomial {
            vars: self.vars.clone(),
            terms,
        }
    }

    pub fn mul_monomial(&self, exps: &[u16]) -> Polynomial {
        self.mul_term(&Term {
            exps: exps.to_vec(),
            coef: Rat::one(),
        })
    }

    /// Exact multivariate division. Returns `None` when `d` is zero or does
    /// not divide `self`.
    pub fn try_div_exact(&self, d: &Polynomial) -> Option<Polynomial> {
        self.check_vars(d);
        let dlt = d.lead_term()?;
        if self.is_zero() {
            return Some(Self::zero(&self.vars));
        }
        let mut rem = self.clone();
        let mut qterms: Vec<Term> = Vec::new();
        while let Some(rlt) = rem.lead_term() {
            let mut exps = Vec::with_capacity(rlt.exps.len());
            for (&a, &b) in rlt.exps.iter().zip(&dlt.exps) {
                exps.push(a.checked_sub(b)?);
            }
            let qt = Term {
                exps,
                coef: &rlt.coef / &dlt.coef,
            };
            rem = rem.sub(&d.mul_term(&qt));
            qterms.push(qt);
        }
        // Leading terms strictly decrease, so the quotient arrived sorted.
        Some(Polynomial {
            vars: self.vars.clone(),
            terms: qterms,
        })
    }

    /// Exact division that must succeed; used after a GCD has been computed.
    pub fn div_exact(&self, d: &Polynomial) -> Polynomial {
        self.try_div_exact(d)
            .expect("exact polynomial division failed")
    }

    /// Rebuild on a larger variable list; `map[i]` is the new index of old
    /// variable `i`. Used when charts are concatenated into product charts.
    pub fn relabel(&self, new_vars: &Vars, map: &[usize]) -> Polynomial {
        assert_eq!(map.len(), self.vars.len());
        let terms = self
            .terms
            .iter()
            .map(|t| {
                let mut exps = vec![0u16; new_vars.len()];
                for (i, &e) in t.exps.iter().enumerate() {
                    exps[map[i]] = e;
                }
                Term {
                    exps,
                    coef: t.coef.clone(),
                }
            })
            .collect();
        Polynomial::from_terms(new_vars, terms)
    }
}

fn write_coef(f: &mut fmt::Formatter<'_>, c: &Rat) -> fmt::Result {
    if c.denom().is_one() {
        write!(f, "{}", c.numer())
    } else {
        write!(f, "{}/{}", c.numer(), c.denom())
    }
}

impl fmt::Display for Polynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (k, t) in self.terms.iter().enumerate() {
            let mag = t.coef.abs();
            if k == 0 {
                if t.coef.is_negative() {
                    write!(f, "-")?;
                }
            } else if t.coef.is_negative() {
                write!(f, " - ")?;
            } else {
                write!(f, " + ")?;
            }
            let has_vars = t.exps.iter().any(|&e| e > 0);
            if !has_vars {
                write_coef(f, &mag)?;
                continue;
            }
            let mut lead = true;
            if !mag.is_one() {
                write_coef(f, &mag)?;
                lead = false;
            }
            for (i, &e) in t.exps.iter().enumerate() {
                if e == 0 {
                    continue;
                }
                if !lead {
                    write!(f, "*")?;
                }
                lead = false;
                write!(f, "{}", self.vars.name(i))?;
                if e > 1 {
                    write!(f, "^{e}")?;
                }
            }
        }
        Ok(())
    }
}
