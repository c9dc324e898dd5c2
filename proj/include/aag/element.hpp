/* element.hpp -- platform-tagged canonical group elements. */
#pragma once

#include <variant>

#include "aag/platform.hpp"
#include "aag/sha256.hpp"

namespace aag {

// A group element in canonical form: a canonical portrait on automaton
// platforms, a translation/matrix pair on the affine platform. Equal elements
// compare equal and serialize to identical bytes, so protocol layers never
// see (or leak) a particular spelling.
class Element {
public:
    static Element identity(PlatformPtr platform);
    static Element from_word(PlatformPtr platform, const Word& w,
                             const ContractionBudget& budget = {});

    const PlatformPtr& platform() const { return platform_; }

    // this * other, with other acting first (word concatenation order).
    Element mul(const Element& other, const ContractionBudget& budget = {}) const;
    Element inverse() const;
    bool is_identity() const;

    bool operator==(const Element& other) const;
    bool operator!=(const Element& other) const { return !(*this == other); }

    const Portrait& portrait() const;
    const AffineElement& affine() const;

    // Canonical serialization: the portrait byte format or the affine format.
    Bytes bytes() const;
    void write(Bytes& out) const;
    static Element from_bytes(PlatformPtr platform, std::span<const std::uint8_t> data,
                              const ContractionBudget& budget = {});
    static Element read(PlatformPtr platform, ByteReader& reader,
                        const ContractionBudget& budget = {});

    // SHA-256 over the platform id byte followed by the canonical bytes.
    Digest key_digest() const;

private:
    Element(PlatformPtr platform, std::variant<Portrait, AffineElement> value)
        : platform_(std::move(platform)), value_(std::move(value)) {}

    void check_same_platform(const Element& other) const;

    PlatformPtr platform_;
    std::variant<Portrait, AffineElement> value_;
};

} // namespace aag
