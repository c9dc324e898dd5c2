#include "aag/affine.hpp"

#include "aag/errors.hpp"

namespace aag {

IntMatrix IntMatrix::identity(std::size_t n) {
    IntMatrix m;
    m.n = n;
    m.a.assign(n * n, 0);
    for (std::size_t i = 0; i < n; ++i) m.at(i, i) = 1;
    return m;
}

IntMatrix mat_mul(const IntMatrix& x, const IntMatrix& y) {
    if (x.n != y.n) throw PlatformError("matrix dimension mismatch");
    IntMatrix out;
    out.n = x.n;
    out.a.assign(x.n * x.n, 0);
    for (std::size_t i = 0; i < x.n; ++i)
        for (std::size_t k = 0; k < x.n; ++k) {
            const BigInt& xv = x.at(i, k);
            if (xv == 0) continue;
            for (std::size_t j = 0; j < x.n; ++j) out.at(i, j) += xv * y.at(k, j);
        }
    return out;
}

std::vector<BigInt> mat_vec(const IntMatrix& m, const std::vector<BigInt>& v) {
    if (v.size() != m.n) throw PlatformError("matrix/vector dimension mismatch");
    std::vector<BigInt> out(m.n, 0);
    for (std::size_t i = 0; i < m.n; ++i)
        for (std::size_t j = 0; j < m.n; ++j) out[i] += m.at(i, j) * v[j];
    return out;
}

BigInt mat_det(const IntMatrix& m) {
    const std::size_t n = m.n;
    if (n == 0) return 1;
    IntMatrix w = m;
    BigInt prev = 1;
    int sign = 1;
    for (std::size_t k = 0; k + 1 < n; ++k) {
        if (w.at(k, k) == 0) {
            std::size_t pivot = k + 1;
            while (pivot < n && w.at(pivot, k) == 0) ++pivot;
            if (pivot == n) return 0;
            for (std::size_t j = 0; j < n; ++j) std::swap(w.at(k, j), w.at(pivot, j));
            sign = -sign;
        }
        for (std::size_t i = k + 1; i < n; ++i)
            for (std::size_t j = k + 1; j < n; ++j)
                w.at(i, j) = (w.at(i, j) * w.at(k, k) - w.at(i, k) * w.at(k, j)) / prev;
        prev = w.at(k, k);
    }
    return sign > 0 ? w.at(n - 1, n - 1) : -w.at(n - 1, n - 1);
}

namespace {

IntMatrix minor_matrix(const IntMatrix& m, std::size_t drop_row, std::size_t drop_col) {
    IntMatrix out;
    out.n = m.n - 1;
    out.a.reserve(out.n * out.n);
    for (std::size_t i = 0; i < m.n; ++i) {
        if (i == drop_row) continue;
        for (std::size_t j = 0; j < m.n; ++j) {
            if (j == drop_col) continue;
            out.a.push_back(m.at(i, j));
        }
    }
    return out;
}

} // namespace

IntMatrix mat_inverse_unimodular(const IntMatrix& m) {
    BigInt det = mat_det(m);
    if (det != 1 && det != -1) throw PlatformError("matrix is not unimodular");
    IntMatrix inv;
    inv.n = m.n;
    inv.a.assign(m.n * m.n, 0);
    if (m.n == 1) {
        inv.at(0, 0) = det; // 1/det = det for det = +-1
        return inv;
    }
    for (std::size_t i = 0; i < m.n; ++i)
        for (std::size_t j = 0; j < m.n; ++j) {
            BigInt cof = mat_det(minor_matrix(m, j, i));
            if ((i + j) % 2 == 1) cof = -cof;
            inv.at(i, j) = det * cof;
        }
    return inv;
}

AffineElement AffineElement::identity(std::size_t n) {
    AffineElement g;
    g.translation.assign(n, 0);
    g.matrix = IntMatrix::identity(n);
    return g;
}

bool AffineElement::is_identity() const {
    for (const BigInt& u : translation)
        if (u != 0) return false;
    return matrix == IntMatrix::identity(matrix.n);
}

AffineElement affine_compose(const AffineElement& first, const AffineElement& second) {
    if (first.dimension() != second.dimension())
        throw PlatformError("affine dimension mismatch");
    AffineElement out;
    out.translation = mat_vec(first.matrix, second.translation);
    for (std::size_t i = 0; i < out.translation.size(); ++i)
        out.translation[i] += first.translation[i];
    out.matrix = mat_mul(first.matrix, second.matrix);
    return out;
}

AffineElement affine_invert(const AffineElement& g) {
    AffineElement out;
    out.matrix = mat_inverse_unimodular(g.matrix);
    out.translation = mat_vec(out.matrix, g.translation);
    for (BigInt& u : out.translation) u = -u;
    return out;
}

namespace {

void write_bigint(Bytes& out, const BigInt& v) {
    bool negative = v < 0;
    BigInt mag = negative ? BigInt(-v) : v;
    Bytes digits;
    while (mag != 0) {
        digits.push_back(static_cast<std::uint8_t>(mag & 0xFF));
        mag >>= 8;
    }
    if (digits.size() > 0xFFFF) throw PlatformError("integer too large to serialize");
    put_u8(out, negative ? 1 : 0);
    put_u16(out, static_cast<std::uint16_t>(digits.size()));
    for (auto it = digits.rbegin(); it != digits.rend(); ++it) out.push_back(*it);
}

BigInt read_bigint(ByteReader& r) {
    std::uint8_t sign = r.u8();
    if (sign > 1) throw ParseError(ParseCode::bad_integer, "integer: bad sign byte");
    std::uint16_t len = r.u16();
    auto bytes = r.take(len);
    if (len > 0 && bytes[0] == 0)
        throw ParseError(ParseCode::bad_integer, "integer: leading zero byte");
    if (len == 0 && sign == 1)
        throw ParseError(ParseCode::bad_integer, "integer: negative zero");
    BigInt v = 0;
    for (std::uint8_t b : bytes) v = (v << 8) | b;
    return sign ? BigInt(-v) : v;
}

} // namespace

void write_affine(Bytes& out, const AffineElement& g) {
    if (g.dimension() == 0 || g.dimension() > 255)
        throw PlatformError("affine dimension out of range");
    put_u8(out, static_cast<std::uint8_t>(g.dimension()));
    for (const BigInt& v : g.matrix.a) write_bigint(out, v);
    for (const BigInt& v : g.translation) write_bigint(out, v);
}

Bytes serialize_affine(const AffineElement& g) {
    Bytes out;
    write_affine(out, g);
    return out;
}

AffineElement read_affine(ByteReader& r) {
    std::size_t n = r.u8();
    if (n == 0) throw ParseError(ParseCode::bad_count, "affine: zero dimension");
    AffineElement g;
    g.matrix.n = n;
    g.matrix.a.reserve(n * n);
    for (std::size_t i = 0; i < n * n; ++i) g.matrix.a.push_back(read_bigint(r));
    g.translation.reserve(n);
    for (std::size_t i = 0; i < n; ++i) g.translation.push_back(read_bigint(r));
    return g;
}

AffineElement deserialize_affine(std::span<const std::uint8_t> bytes) {
    ByteReader r(bytes);
    AffineElement g = read_affine(r);
    r.expect_end();
    return g;
}

} // namespace aag
