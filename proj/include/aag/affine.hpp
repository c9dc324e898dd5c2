/* affine.hpp -- exact integer affine transformations v -> u + M v. */
#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <cstdint>
#include <span>
#include <vector>

#include "aag/bytes.hpp"

namespace aag {

using BigInt = boost::multiprecision::cpp_int;

// Row-major square integer matrix.
struct IntMatrix {
    std::size_t n = 0;
    std::vector<BigInt> a; // n*n entries

    static IntMatrix identity(std::size_t n);
    BigInt& at(std::size_t i, std::size_t j) { return a[i * n + j]; }
    const BigInt& at(std::size_t i, std::size_t j) const { return a[i * n + j]; }
    bool operator==(const IntMatrix&) const = default;
};

IntMatrix mat_mul(const IntMatrix& x, const IntMatrix& y);
std::vector<BigInt> mat_vec(const IntMatrix& m, const std::vector<BigInt>& v);
// Fraction-free (Bareiss) determinant; exact.
BigInt mat_det(const IntMatrix& m);
// Inverse of a matrix with det = +-1; integral by the adjugate formula.
IntMatrix mat_inverse_unimodular(const IntMatrix& m);

// v -> translation + matrix * v. The pair is its own normal form: equal
// transformations have identical fields, so comparison and serialization are
// exact with no canonicalization step.
struct AffineElement {
    std::vector<BigInt> translation;
    IntMatrix matrix;

    static AffineElement identity(std::size_t n);
    std::size_t dimension() const { return matrix.n; }
    bool is_identity() const;
    bool operator==(const AffineElement&) const = default;
};

// first(second(v)) = u1 + M1 u2 + M1 M2 v.
AffineElement affine_compose(const AffineElement& first, const AffineElement& second);
AffineElement affine_invert(const AffineElement& g);

// Wire layout: n as one byte, then the n^2 matrix entries row-major, then the
// n translation entries; each integer is a sign byte (0 non-negative, 1
// negative), a u16 magnitude byte length, and the magnitude big-endian with
// no leading zero. Zero is sign 0, length 0.
void write_affine(Bytes& out, const AffineElement& g);
Bytes serialize_affine(const AffineElement& g);
AffineElement read_affine(ByteReader& reader);
AffineElement deserialize_affine(std::span<const std::uint8_t> bytes);

} // namespace aag
