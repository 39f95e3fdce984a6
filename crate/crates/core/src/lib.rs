//! Fractional distance of binary parity-check matrices, a cutting-plane
//! search for redundant rows that raise it, and an LP decoder.

pub mod bscsim;
pub mod codecio;
pub mod cutplane;
pub mod data;
pub mod fracdist;
pub mod gf2;
pub mod lp;
pub mod lpdecode;
pub mod polytope;
pub mod rational;

pub use gf2::{BitMatrix, BitVector, Gf2Error};
pub use lp::{LpOutcome, LpProblem, LpSolution};
pub use polytope::{ConstraintId, ConstraintKind, ConstraintSystem, LinConstraint, Relation};
pub use rational::{Rational, RationalVector};
pub use fracdist::{fractional_distance, gamma_set, FacetHints, FracDistReport, Method, SweepOptions};
pub use cutplane::{greedy_improve, CutRecord, GreedyConfig, GreedyOutcome};
pub use lpdecode::{guaranteed_errors, lp_decode, DecodeResult, DecodeStatus, LpDecoder};
pub use bscsim::{simulate_bler, sweep, SimError, SimPoint};
pub use codecio::{read_matrix_file, write_matrix_file, CodecError, MatrixFormat};
