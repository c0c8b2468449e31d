#ifndef KOSZUL_ERRORS_HPP
#define KOSZUL_ERRORS_HPP

#include <array>
#include <cstddef>
#include <stdexcept>
#include <string>

namespace koszul {

/// Base class of every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Malformed textual input (rationals, JSON documents, module specs).
class ParseError : public Error {
public:
    using Error::Error;
};

class DimensionMismatch : public Error {
public:
    using Error::Error;
};

class BadIndex : public Error {
public:
    using Error::Error;
};

class AntisymmetryViolation : public Error {
public:
    using Error::Error;
};

/// Jacobi identity fails on the basis triple (i, j, k).
class JacobiViolation : public Error {
public:
    JacobiViolation(std::array<std::size_t, 3> triple, const std::string& what)
        : Error(what), triple_(triple) {}
    std::array<std::size_t, 3> triple() const { return triple_; }

private:
    std::array<std::size_t, 3> triple_;
};

class NotReductive : public Error {
public:
    using Error::Error;
};

class InvalidRepresentation : public Error {
public:
    using Error::Error;
};

/// A user-supplied module violates one of the K(g) identities.
class InvalidModule : public Error {
public:
    using Error::Error;
};

class WindowOverflow : public Error {
public:
    using Error::Error;
};

/// Requested cohomology degree lies beyond what a truncated complex certifies.
class WindowTooSmall : public Error {
public:
    using Error::Error;
};

/// A vector (or the image of a map) expected in a subspace is not in it.
class NotInSubspace : public Error {
public:
    using Error::Error;
};

/// Input to complement_basis is dependent or not contained in the ambient span.
class InvalidBasis : public Error {
public:
    using Error::Error;
};

/// A linear system that theory says is solvable turned out inconsistent.
class InconsistentSystem : public Error {
public:
    using Error::Error;
};

/// Dimension-count or structural verification failed.
class VerificationFailure : public Error {
public:
    using Error::Error;
};

}  // namespace koszul

#endif
