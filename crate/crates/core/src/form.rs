//! Homogeneous forms over GF(p) and their text representation.
//!
//! Grammar accepted by [`Form::parse`] (whitespace is ignored):
//!
//! ```text
//! form   := term ('+' term)*
//! term   := coeff | coeff '*' mono | mono
//! mono   := factor ('*' factor)*
//! factor := var | var '^' uint
//! coeff  := uint            (reduced mod p)
//! ```

use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::field::Scalar;
use crate::monomial::{Monomial, MonomialTable};
use crate::ring::RingContext;

/// A homogeneous polynomial of a fixed degree.
///
/// Terms never carry a zero coefficient; the zero form keeps its degree.
#[derive(Clone, PartialEq, Eq)]
pub struct Form {
    ctx: Arc<RingContext>,
    degree: u32,
    terms: BTreeMap<Monomial, Scalar>,
}

impl Form {
    pub fn zero(ctx: &Arc<RingContext>, degree: u32) -> Self {
        Form {
            ctx: ctx.clone(),
            degree,
            terms: BTreeMap::new(),
        }
    }

    pub fn monomial(ctx: &Arc<RingContext>, m: Monomial, coeff: Scalar) -> Self {
        assert_eq!(m.n(), ctx.n());
        let mut f = Form::zero(ctx, m.degree());
        if !coeff.is_zero() {
            f.terms.insert(m, coeff);
        }
        f
    }

    /// `x_{i+1}`.
    pub fn var(ctx: &Arc<RingContext>, i: usize) -> Self {
        Form::monomial(ctx, Monomial::var(ctx.n(), i), ctx.field().one())
    }

    /// Builds a form from `(monomial, coefficient)` pairs, summing repeats.
    pub fn from_terms<I>(ctx: &Arc<RingContext>, degree: u32, terms: I) -> Result<Self>
    where
        I: IntoIterator<Item = (Monomial, Scalar)>,
    {
        let k = ctx.field();
        let mut f = Form::zero(ctx, degree);
        for (m, c) in terms {
            if m.n() != ctx.n() {
                return Err(Error::ContextMismatch(format!(
                    "monomial in {} variables, ring has {}",
                    m.n(),
                    ctx.n()
                )));
            }
            if m.degree() != degree {
                return Err(Error::NotHomogeneous {
                    first: degree,
                    other: m.degree(),
                });
            }
            let c = k.add(f.terms.get(&m).copied().unwrap_or_default(), c);
            if c.is_zero() {
                f.terms.remove(&m);
            } else {
                f.terms.insert(m, c);
            }
        }
        Ok(f)
    }

    /// Form whose coefficients are given in the descending-lex order of degree `degree`.
    pub fn from_dense(ctx: &Arc<RingContext>, degree: u32, coeffs: &[u32]) -> Self {
        let table = MonomialTable::get(ctx.n(), degree);
        assert_eq!(coeffs.len(), table.len());
        let k = ctx.field();
        let mut f = Form::zero(ctx, degree);
        for (m, &c) in table.monomials().iter().zip(coeffs) {
            let c = k.from_u64(c as u64);
            if !c.is_zero() {
                f.terms.insert(*m, c);
            }
        }
        f
    }

    pub fn to_dense(&self) -> Vec<u32> {
        let table = MonomialTable::get(self.ctx.n(), self.degree);
        let mut v = vec![0; table.len()];
        for (m, c) in &self.terms {
            v[table.index_of(m).expect("term of form degree")] = c.value();
        }
        v
    }

    pub fn ctx(&self) -> &Arc<RingContext> {
        &self.ctx
    }

    pub fn degree(&self) -> u32 {
        self.degree
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn coeff(&self, m: &Monomial) -> Scalar {
        self.terms.get(m).copied().unwrap_or_default()
    }

    /// Terms in descending lex order.
    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &Scalar)> {
        self.terms.iter().rev()
    }

    fn check_compatible(&self, other: &Form) -> Result<()> {
        self.ctx.check_same(&other.ctx)
    }

    pub fn add(&self, other: &Form) -> Result<Form> {
        self.check_compatible(other)?;
        if self.degree != other.degree {
            return Err(Error::DegreeMismatch {
                expected: self.degree,
                found: other.degree,
            });
        }
        Form::from_terms(
            &self.ctx,
            self.degree,
            self.terms
                .iter()
                .chain(other.terms.iter())
                .map(|(m, c)| (*m, *c)),
        )
    }

    pub fn scale(&self, c: Scalar) -> Form {
        let k = self.ctx.field();
        let mut f = Form::zero(&self.ctx, self.degree);
        if c.is_zero() {
            return f;
        }
        f.terms = self.terms.iter().map(|(m, a)| (*m, k.mul(*a, c))).collect();
        f
    }

    pub fn neg(&self) -> Form {
        self.scale(self.ctx.field().neg(self.ctx.field().one()))
    }

    pub fn sub(&self, other: &Form) -> Result<Form> {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &Form) -> Result<Form> {
        self.check_compatible(other)?;
        let k = self.ctx.field();
        let degree = self.degree + other.degree;
        let mut acc: BTreeMap<Monomial, Scalar> = BTreeMap::new();
        for (m1, c1) in &self.terms {
            for (m2, c2) in &other.terms {
                let e = acc.entry(m1.mul(m2)).or_default();
                *e = k.add(*e, k.mul(*c1, *c2));
            }
        }
        acc.retain(|_, c| !c.is_zero());
        Ok(Form {
            ctx: self.ctx.clone(),
            degree,
            terms: acc,
        })
    }

    /// Multiplies by a monomial (coefficient one).
    pub fn mul_monomial(&self, m: &Monomial) -> Form {
        Form {
            ctx: self.ctx.clone(),
            degree: self.degree + m.degree(),
            terms: self.terms.iter().map(|(t, c)| (t.mul(m), *c)).collect(),
        }
    }

    pub fn parse(ctx: &Arc<RingContext>, text: &str) -> Result<Form> {
        Parser::new(ctx, text).form()
    }
}

impl fmt::Debug for Form {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Form[{}]({})", self.degree, self)
    }
}

/// Prints terms in descending lex as `c*mono`, omitting unit coefficients.
///
/// The zero form prints as `0` in degree zero and as `0*x1^d` otherwise, so
/// that parsing recovers its degree.
impl fmt::Display for Form {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return match self.degree {
                0 => write!(f, "0"),
                1 => write!(f, "0*{}", self.ctx.var_names()[0]),
                d => write!(f, "0*{}^{}", self.ctx.var_names()[0], d),
            };
        }
        for (i, (m, c)) in self.terms().enumerate() {
            if i > 0 {
                write!(f, " + ")?;
            }
            match (m.degree(), c.value()) {
                (0, c) => write!(f, "{c}")?,
                (_, 1) => write!(f, "{}", m.display(&self.ctx))?,
                (_, c) => write!(f, "{c}*{}", m.display(&self.ctx))?,
            }
        }
        Ok(())
    }
}

struct Parser<'a> {
    ctx: &'a Arc<RingContext>,
    // (byte offset in the original text, char) with whitespace removed
    chars: Vec<(usize, char)>,
    pos: usize,
    len: usize,
}

impl<'a> Parser<'a> {
    fn new(ctx: &'a Arc<RingContext>, text: &str) -> Self {
        let chars: Vec<_> = text.char_indices().filter(|(_, c)| !c.is_whitespace()).collect();
        Parser {
            ctx,
            chars,
            pos: 0,
            len: text.len(),
        }
    }

    fn peek(&self) -> Option<char> {
        self.chars.get(self.pos).map(|&(_, c)| c)
    }

    fn offset(&self) -> usize {
        self.chars.get(self.pos).map(|&(o, _)| o).unwrap_or(self.len)
    }

    fn err<T>(&self, msg: impl Into<String>) -> Result<T> {
        Err(Error::Parse {
            pos: self.offset(),
            msg: msg.into(),
        })
    }

    fn form(&mut self) -> Result<Form> {
        let mut terms = vec![self.term()?];
        while let Some(c) = self.peek() {
            if c != '+' {
                return self.err(format!("unexpected {c:?}"));
            }
            self.pos += 1;
            terms.push(self.term()?);
        }
        let degree = terms[0].0.degree();
        if let Some((m, _)) = terms.iter().find(|(m, _)| m.degree() != degree) {
            return Err(Error::NotHomogeneous {
                first: degree,
                other: m.degree(),
            });
        }
        Form::from_terms(self.ctx, degree, terms)
    }

    fn term(&mut self) -> Result<(Monomial, Scalar)> {
        let k = self.ctx.field();
        match self.peek() {
            Some(c) if c.is_ascii_digit() => {
                let coeff = k.from_u64(self.uint_mod(k.modulus() as u64)?);
                if self.peek() == Some('*') {
                    self.pos += 1;
                    Ok((self.mono()?, coeff))
                } else {
                    Ok((Monomial::one(self.ctx.n()), coeff))
                }
            }
            Some(_) => Ok((self.mono()?, k.one())),
            None => self.err("expected a term"),
        }
    }

    /// Reads a decimal integer, reduced modulo `m` digit by digit.
    fn uint_mod(&mut self, m: u64) -> Result<u64> {
        let mut acc = 0u64;
        let mut any = false;
        while let Some(c) = self.peek().and_then(|c| c.to_digit(10)) {
            acc = (acc.saturating_mul(10).saturating_add(c as u64)) % m;
            any = true;
            self.pos += 1;
        }
        if !any {
            return self.err("expected an unsigned integer");
        }
        Ok(acc)
    }

    fn mono(&mut self) -> Result<Monomial> {
        let n = self.ctx.n();
        let mut exps = vec![0u32; n];
        loop {
            let var = self.ident()?;
            let e = if self.peek() == Some('^') {
                self.pos += 1;
                let e = self.uint_mod(u64::MAX)?;
                if e > u8::MAX as u64 {
                    return self.err(format!("exponent {e} exceeds 255"));
                }
                e as u32
            } else {
                1
            };
            exps[var] += e;
            if self.peek() == Some('*') {
                self.pos += 1;
            } else {
                break;
            }
        }
        Monomial::from_exponents(&exps).map_err(|e| Error::Parse {
            pos: self.offset(),
            msg: e.to_string(),
        })
    }

    fn ident(&mut self) -> Result<usize> {
        let start = self.pos;
        let at = self.offset();
        match self.peek() {
            Some(c) if c.is_ascii_alphabetic() || c == '_' => self.pos += 1,
            Some(c) => return self.err(format!("expected a variable, found {c:?}")),
            None => return self.err("expected a variable"),
        }
        while matches!(self.peek(), Some(c) if c.is_ascii_alphanumeric() || c == '_') {
            self.pos += 1;
        }
        let name: String = self.chars[start..self.pos].iter().map(|&(_, c)| c).collect();
        self.ctx.var_index(&name).ok_or(Error::Parse {
            pos: at,
            msg: format!("unknown variable {name:?}"),
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn ring(n: usize, p: u64) -> Arc<RingContext> {
        Arc::new(RingContext::new(n, p).unwrap())
    }

    #[test]
    fn multiplication_examples() {
        let r = ring(2, 101);
        let x1 = Form::var(&r, 0);
        let x2 = Form::var(&r, 1);
        assert_eq!(x1.mul(&x1).unwrap(), Form::parse(&r, "x1^2").unwrap());
        let prod = x1.add(&x2).unwrap().mul(&x1.sub(&x2).unwrap()).unwrap();
        assert_eq!(prod, Form::parse(&r, "x1^2 + 100*x2^2").unwrap());
        assert_eq!(prod.to_string(), "x1^2 + 100*x2^2");
        let z = Form::zero(&r, 1).mul(&prod).unwrap();
        assert!(z.is_zero());
        assert_eq!(z.degree(), 3);
    }

    #[test]
    fn parse_examples() {
        let r = ring(3, 101);
        let f = Form::parse(&r, "x1^2 + 3*x2*x3").unwrap();
        assert_eq!((f.num_terms(), f.degree()), (2, 2));
        assert!(matches!(
            Form::parse(&r, "x1*x2 + x3"),
            Err(Error::NotHomogeneous { first: 2, other: 1 })
        ));
        assert_eq!(Form::parse(&r, "102*x1^2").unwrap(), Form::parse(&r, "x1^2").unwrap());
        assert!(matches!(Form::parse(&r, "x1*y"), Err(Error::Parse { .. })));
        assert!(matches!(Form::parse(&r, "x1 - x2"), Err(Error::Parse { .. })));
        assert!(matches!(Form::parse(&r, ""), Err(Error::Parse { .. })));
        assert!(matches!(Form::parse(&r, "x1 +"), Err(Error::Parse { .. })));
    }

    #[test]
    fn parse_details() {
        let r = ring(3, 7);
        // repeated factors and like terms combine; coefficients reduce
        let f = Form::parse(&r, " x1 * x1*x2 + 6 * x1^2 * x2 + 2*x3^3").unwrap();
        assert_eq!(f.to_string(), "2*x3^3");
        assert!(Form::parse(&r, "7*x1").unwrap().is_zero());
        assert_eq!(Form::parse(&r, "7*x1").unwrap().degree(), 1);
        assert_eq!(Form::parse(&r, "5").unwrap().to_string(), "5");
        let big = Form::parse(&r, "123456789012345678901234567890*x1").unwrap();
        assert_eq!(big.coeff(&Monomial::var(3, 0)).value(), (123456789012345678901234567890u128 % 7) as u32);
    }

    #[test]
    fn zero_forms_round_trip() {
        let r = ring(3, 101);
        for d in 0..4 {
            let z = Form::zero(&r, d);
            assert_eq!(Form::parse(&r, &z.to_string()).unwrap(), z);
        }
    }

    #[test]
    fn context_mismatch() {
        let a = Form::var(&ring(2, 101), 0);
        let b = Form::var(&ring(2, 103), 0);
        assert!(matches!(a.mul(&b), Err(Error::ContextMismatch(_))));
    }

    fn arb_form(n: usize, p: u64) -> impl Strategy<Value = Form> {
        (0u32..4).prop_flat_map(move |d| {
            let len = MonomialTable::get(n, d).len();
            proptest::collection::vec(0u32..p as u32, len)
                .prop_map(move |c| Form::from_dense(&ring(n, p), d, &c))
        })
    }

    proptest! {
        #[test]
        fn print_parse_round_trip(f in arb_form(4, 101)) {
            let back = Form::parse(f.ctx(), &f.to_string()).unwrap();
            prop_assert_eq!(back, f);
        }

        #[test]
        fn distributive(
            a in proptest::collection::vec(0u32..13, 6),
            b in proptest::collection::vec(0u32..13, 6),
            c in proptest::collection::vec(0u32..13, 3),
        ) {
            let r = ring(3, 13);
            let (f, g, h) = (Form::from_dense(&r, 2, &a), Form::from_dense(&r, 2, &b), Form::from_dense(&r, 1, &c));
            let lhs = f.add(&g).unwrap().mul(&h).unwrap();
            let rhs = f.mul(&h).unwrap().add(&g.mul(&h).unwrap()).unwrap();
            prop_assert_eq!(lhs, rhs);
            prop_assert_eq!(f.mul(&h).unwrap(), h.mul(&f).unwrap());
        }
    }
}
