//! Membership test for the subgroup `dlog K^x` of Kähler 1-forms.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;

use super::elem::FieldElem;
use super::factor::irreducible_factors;
use super::forms::{dlog, OneFormK};
use super::gcd::{lcm, prem};
use super::poly::Poly;

/// Witness `omega = sum n_q dlog q`.
#[derive(Clone, Debug, PartialEq)]
pub struct DlogCertificate {
    pub entries: Vec<(Poly, BigRational)>,
}

impl DlogCertificate {
    /// Re-evaluates `sum n_q dlog q`.
    pub fn form(&self) -> OneFormK {
        self.entries
            .iter()
            .fold(OneFormK::zero(), |acc, (q, n)| acc.add(&dlog(&FieldElem::from_poly(q.clone())).unwrap().scale_q(n)))
    }

    pub fn is_integral(&self) -> bool {
        self.entries.iter().all(|(_, n)| n.is_integer())
    }

    pub fn render(&self, names: &[String]) -> String {
        if self.entries.is_empty() {
            return "[]".to_string();
        }
        let parts: Vec<String> = self
            .entries
            .iter()
            .map(|(q, n)| format!("({}, {})", q.render(names), super::poly::render_rational(n)))
            .collect();
        format!("[{}]", parts.join(", "))
    }
}

/// Decides whether `omega` lies in the Z-span (or 1/2 Z-span when
/// `allow_half`) of `dlog q` for irreducible polynomials `q`, returning the
/// certificate if so.
pub fn dlog_class_reduce(omega: &OneFormK, allow_half: bool) -> Option<DlogCertificate> {
    if omega.is_zero() {
        return Some(DlogCertificate { entries: Vec::new() });
    }
    let mut l = Poly::one();
    for (_, c) in omega.iter() {
        l = lcm(&l, c.den());
    }
    if l.is_constant() {
        // a nonzero form with polynomial coefficients is never logarithmic
        return None;
    }
    let mut entries = Vec::new();
    for q in irreducible_factors(&l) {
        let n = residue_along(omega, &q)?;
        if !n.is_zero() {
            entries.push((q, n));
        }
    }
    let cert = DlogCertificate { entries };
    if !omega.sub(&cert.form()).is_zero() {
        return None;
    }
    let two = BigRational::from_integer(BigInt::from(2));
    let ok = cert.entries.iter().all(|(_, n)| if allow_half { (n * &two).is_integer() } else { n.is_integer() });
    if ok {
        Some(cert)
    } else {
        None
    }
}

/// The constant `n` with `omega = n dq/q + (regular along q)`, if the polar
/// part along `q` has that shape.
fn residue_along(omega: &OneFormK, q: &Poly) -> Option<BigRational> {
    let j = q.vars_used().into_iter().next()?;
    let dq = q.derivative(j);
    let c = omega.coeff(j);
    // c = N / (q R) with q not dividing R, else the residue is zero
    let num = c.num().clone();
    let r = match c.den().exact_div(q) {
        Some(r) => r,
        None => return Some(BigRational::zero()),
    };
    if r.exact_div(q).is_some() {
        return None;
    }
    let b = &r * &dq;
    let (ra, rb) = scaled_remainders(&num, &b, q, j);
    if rb.is_zero() {
        return None;
    }
    if ra.is_zero() {
        return Some(BigRational::zero());
    }
    let n = ra.leading_coeff() / rb.leading_coeff();
    if rb.scale(&n) == ra {
        Some(n)
    } else {
        None
    }
}

/// Pseudo-remainders of `a` and `b` modulo `q` in variable `j`, scaled by
/// the same power of the leading coefficient of `q`.
fn scaled_remainders(a: &Poly, b: &Poly, q: &Poly, j: usize) -> (Poly, Poly) {
    let dq = q.degree_in(j);
    let ea = (a.degree_in(j) + 1).saturating_sub(dq);
    let eb = (b.degree_in(j) + 1).saturating_sub(dq);
    let e = ea.max(eb);
    let lc = q.lc_in(j);
    let ra = &prem(a, q, j) * &lc.pow(e - ea);
    let rb = &prem(b, q, j) * &lc.pow(e - eb);
    (ra, rb)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::funcfield::forms::d_k;
    use crate::scalar::{q, qq};
    use num_traits::One;

    fn x() -> FieldElem {
        FieldElem::var(0)
    }
    fn y() -> FieldElem {
        FieldElem::var(1)
    }

    #[test]
    fn spec_anchors() {
        let dxx = OneFormK::basis(0, FieldElem::one() / x());
        let c = dlog_class_reduce(&dxx, false).unwrap();
        assert_eq!(c.entries, vec![(Poly::var(0), q(1))]);
        assert!(dlog_class_reduce(&OneFormK::ds(0), false).is_none());
        let half = dxx.scale_q(&qq(3, 2));
        assert!(dlog_class_reduce(&half, false).is_none());
        assert_eq!(dlog_class_reduce(&half, true).unwrap().entries, vec![(Poly::var(0), qq(3, 2))]);
    }

    #[test]
    fn products_of_factors() {
        let f1 = &(&x() * &y()) + &FieldElem::one();
        let f2 = &x() - &y();
        let f = &(&f1.pow(3) * &f2.pow(-2)) * &FieldElem::from_int(5);
        let w = dlog(&f).unwrap();
        let c = dlog_class_reduce(&w, false).unwrap();
        assert_eq!(c.form(), w);
        assert!(c.is_integral());
        // a non-closed form fails
        let bad = w.add(&OneFormK::basis(0, y()));
        assert!(dlog_class_reduce(&bad, false).is_none());
        // a closed but non-logarithmic form fails
        let exact = d_k(&(&FieldElem::one() / &f1));
        assert!(dlog_class_reduce(&exact, false).is_none());
    }
}
