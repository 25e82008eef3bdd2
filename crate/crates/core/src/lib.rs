pub mod exact;

pub use exact::{ExactError, MultiPoly, RatFunc, Rational, Scalar, Symbol};
pub mod functors;
pub mod glmodules;
pub mod linalg;
pub mod presentations;
pub mod weylbc;

pub use linalg::{SparseOperator, SparseVec, Subspace};
pub use weylbc::{enumerate_group, GroupAlgebraElement, SignedPermutation};
pub mod rootsys_dunkl;

pub use presentations::{
    relation_set, verify, Generator, Params, Presentation, RelationExpression, Representation,
    VerificationReport,
};
pub use rootsys_dunkl::{DunklParams, LaurentPolynomial, LaurentRep, RootSystemBC};
