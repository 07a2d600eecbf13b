//! Exact arithmetic in K = Q(s_1, ..., s_k), its Kähler differentials and
//! the `dlog K^x` membership test.

pub mod dlog;
pub mod elem;
pub mod factor;
pub mod forms;
pub mod gcd;
pub mod poly;

pub use dlog::{dlog_class_reduce, DlogCertificate};
pub use elem::FieldElem;
pub use forms::{d_k, dlog, OneFormK, TwoFormK};
pub use poly::{Monomial, Poly};
