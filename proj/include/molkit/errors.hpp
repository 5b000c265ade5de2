#pragma once

#include <stdexcept>
#include <string>

namespace molkit {

struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// exact linear algebra
struct DimensionMismatch : Error { using Error::Error; };
struct SingularMatrix : Error { using Error::Error; };
struct NotSymmetric : Error { using Error::Error; };

// subspace lattice
struct AmbientMismatch : Error { using Error::Error; };
struct NotBelow : Error { using Error::Error; };
struct NotAnAtom : Error { using Error::Error; };
struct NotPositiveDefinite : Error { using Error::Error; };

// finite lattices
struct NotModular : Error { using Error::Error; };
struct NotComparable : Error { using Error::Error; };
struct NotNeutralIdeal : Error { using Error::Error; };
struct NoComplementFound : Error { using Error::Error; };
struct NotMOL : Error { using Error::Error; };
struct DecompositionFailure : Error { using Error::Error; };
struct NotLattice : Error { using Error::Error; };

// geometry
struct NotSubalgebra : Error { using Error::Error; };
struct RepresentationFailure : Error { using Error::Error; };
struct NotPolarity : Error { using Error::Error; };
struct CapExceeded : Error { using Error::Error; };

// frames
struct FrameAxiomViolation : Error { using Error::Error; };
struct BadIndexPattern : Error { using Error::Error; };
struct IndexMismatch : Error { using Error::Error; };
struct NotInCoordinateDomain : Error { using Error::Error; };
struct SingularAlpha : Error { using Error::Error; };

// witness
struct NonPositiveSeed : Error { using Error::Error; };
struct IdentityMismatch : Error { using Error::Error; };

// terms / io
struct SyntaxError : Error { using Error::Error; };
struct UnboundVariable : Error { using Error::Error; };
struct UnknownSpec : Error { using Error::Error; };
struct ParseError : Error { using Error::Error; };

}  // namespace molkit
