//! Stability verdicts and destabilization certificates shared by the torus
//! and non-reductive tests.

use std::fmt;

use num_bigint::BigInt;

use crate::binary::P1Point;
use crate::rational::Rat;
use crate::weighted::{GL2Element, UnipotentElement};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Status {
    Unstable,
    StrictlySemistable,
    Stable,
}

impl Status {
    /// Severity order for oracle worst-case aggregation: Unstable is worst.
    pub fn severity(&self) -> u8 {
        match self {
            Status::Unstable => 2,
            Status::StrictlySemistable => 1,
            Status::Stable => 0,
        }
    }

    pub fn is_semistable(&self) -> bool {
        !matches!(self, Status::Unstable)
    }
}

impl fmt::Display for Status {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Status::Unstable => "Unstable",
            Status::StrictlySemistable => "StrictlySemistable",
            Status::Stable => "Stable",
        };
        write!(f, "{s}")
    }
}

/// The quadric section part of a destabilizing move: explicit rational
/// coefficients of `q = αx² + βxy + γy²`, or a marker that a section exists
/// over the closure, certified by ideal properness, without a rational
/// representative found.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SectionWitness {
    Rational { alpha: Rat, beta: Rat, gamma: Rat },
    IdealCertified,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CandidateKind {
    /// Destabilized by the central one-parameter subgroup alone.
    CentralOnly,
    /// Needs a section move and a direction in ℙ¹.
    SectionAndPoint,
}

/// A concrete group element `h = u·g` used to verify a destabilization.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HWitness {
    pub u: UnipotentElement,
    pub g: GL2Element,
}

/// Destabilization data for the non-reductive tests: the separating normal
/// is always present and primitive; the section/point/witness parts are
/// filled in when a rational representative exists.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DestabilizationCandidate {
    pub kind: CandidateKind,
    pub section: Option<SectionWitness>,
    pub point: Option<P1Point>,
    pub normal: [BigInt; 2],
    pub witness: Option<HWitness>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Certificate {
    /// Primitive integer covector pairing strictly positively with every
    /// support weight (torus tests).
    Covector(Vec<BigInt>),
    /// Structured non-reductive destabilization data.
    Candidate(Box<DestabilizationCandidate>),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StabilityVerdict {
    pub status: Status,
    pub certificate: Option<Certificate>,
    pub endpoint_caveat: bool,
}

impl StabilityVerdict {
    pub fn stable() -> Self {
        StabilityVerdict { status: Status::Stable, certificate: None, endpoint_caveat: false }
    }

    pub fn strictly_semistable() -> Self {
        StabilityVerdict {
            status: Status::StrictlySemistable,
            certificate: None,
            endpoint_caveat: false,
        }
    }

    /// Unstable verdicts always carry a certificate.
    pub fn unstable(certificate: Certificate) -> Self {
        StabilityVerdict {
            status: Status::Unstable,
            certificate: Some(certificate),
            endpoint_caveat: false,
        }
    }

    pub fn with_caveat(mut self, caveat: bool) -> Self {
        self.endpoint_caveat = caveat;
        self
    }
}
