//! Exact formal-series computations for the enumerative geometry of a K3
//! surface times a curve.
//!
//! * [`algebra`]: rationals and truncated multivariate Laurent series.
//! * [`kkv`]: the KKV product and the Gopakumar-Vafa table `n_{g,h}`.
//! * [`ray_series`]: reduced Gromov-Witten and stable-pair series on a ray
//!   of curve classes, with the exp/log identities between them.
//! * [`sheaf_count`]: Mukai vectors, Hilbert scheme Euler characteristics and
//!   Joyce-Song invariants.
//! * [`vafa_witten`]: pair invariants on a ray of charges and the VW extraction.
//! * [`acceptance`]: the verification suite run by `k3series verify`.
//! * [`cli`]: the `k3series` command line.

pub mod algebra;
pub mod kkv;
pub mod ray_series;
pub mod sheaf_count;
pub mod vafa_witten;
pub mod acceptance;
pub mod cli;
