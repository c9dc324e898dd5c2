#include "aag/element.hpp"

namespace aag {

Element Element::identity(PlatformPtr platform) {
    if (platform->kind() == PlatformKind::affine)
        return Element(platform, AffineElement::identity(platform->dimension()));
    Portrait p;
    p.platform_id = platform->id();
    p.alphabet_size = platform->group().alphabet_size();
    p.nucleus_size = static_cast<std::uint8_t>(platform->nucleus().size());
    p.root.leaf = true;
    p.root.leaf_id = platform->nucleus().identity_id();
    return Element(std::move(platform), std::move(p));
}

Element Element::from_word(PlatformPtr platform, const Word& w, const ContractionBudget& budget) {
    if (platform->kind() == PlatformKind::affine)
        return Element(platform, platform->evaluate_affine(w));
    Portrait p = canonical_portrait(platform->group(), platform->nucleus(), w, budget);
    return Element(std::move(platform), std::move(p));
}

void Element::check_same_platform(const Element& other) const {
    if (platform_->id() != other.platform_->id() ||
        platform_->wire_config() != other.platform_->wire_config())
        throw PlatformError("elements belong to different platforms");
}

Element Element::mul(const Element& other, const ContractionBudget& budget) const {
    check_same_platform(other);
    if (platform_->kind() == PlatformKind::affine)
        return Element(platform_,
                       affine_compose(std::get<AffineElement>(value_),
                                      std::get<AffineElement>(other.value_)));
    return Element(platform_, portrait_multiply(platform_->group(), platform_->nucleus(),
                                                std::get<Portrait>(value_),
                                                std::get<Portrait>(other.value_), budget));
}

Element Element::inverse() const {
    if (platform_->kind() == PlatformKind::affine)
        return Element(platform_, affine_invert(std::get<AffineElement>(value_)));
    return Element(platform_, portrait_invert(platform_->group(), platform_->nucleus(),
                                              std::get<Portrait>(value_)));
}

bool Element::is_identity() const {
    if (platform_->kind() == PlatformKind::affine)
        return std::get<AffineElement>(value_).is_identity();
    const Portrait& p = std::get<Portrait>(value_);
    return p.root.leaf && p.root.leaf_id == platform_->nucleus().identity_id();
}

bool Element::operator==(const Element& other) const {
    if (platform_->id() != other.platform_->id()) return false;
    return value_ == other.value_;
}

const Portrait& Element::portrait() const {
    if (platform_->kind() != PlatformKind::automaton)
        throw PlatformError("element is not portrait-backed");
    return std::get<Portrait>(value_);
}

const AffineElement& Element::affine() const {
    if (platform_->kind() != PlatformKind::affine)
        throw PlatformError("element is not affine");
    return std::get<AffineElement>(value_);
}

void Element::write(Bytes& out) const {
    if (platform_->kind() == PlatformKind::affine) {
        write_affine(out, std::get<AffineElement>(value_));
        return;
    }
    Bytes p = serialize_portrait(std::get<Portrait>(value_));
    out.insert(out.end(), p.begin(), p.end());
}

Bytes Element::bytes() const {
    Bytes out;
    write(out);
    return out;
}

Element Element::read(PlatformPtr platform, ByteReader& reader, const ContractionBudget& budget) {
    if (platform->kind() == PlatformKind::affine) {
        AffineElement g = read_affine(reader);
        if (g.dimension() != platform->dimension())
            throw ParseError(ParseCode::bad_count, "affine element dimension mismatch");
        BigInt det = mat_det(g.matrix);
        if (det != 1 && det != -1)
            throw ParseError(ParseCode::bad_integer, "affine element matrix is not unimodular");
        return Element(std::move(platform), std::move(g));
    }
    Portrait p = read_portrait(reader, platform->id(), platform->group().alphabet_size(),
                               platform->nucleus(), budget);
    return Element(std::move(platform), std::move(p));
}

Element Element::from_bytes(PlatformPtr platform, std::span<const std::uint8_t> data,
                            const ContractionBudget& budget) {
    ByteReader r(data);
    Element e = read(std::move(platform), r, budget);
    r.expect_end();
    return e;
}

Digest Element::key_digest() const {
    Bytes input;
    put_u8(input, platform_->id());
    write(input);
    return sha256(input);
}

} // namespace aag
