/* errors.hpp -- exception taxonomy shared by the toolkit. */
#pragma once

#include <stdexcept>
#include <string>

namespace aag {

// Raised when a contraction budget (closure size or recursion depth) is
// exhausted. Never stands in for a boolean answer: callers can always tell
// "ran out of budget" apart from "trivial"/"nontrivial".
class BudgetError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Invalid platform data or a cross-platform operand mix.
class PlatformError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Byte-level decoding failures. Every malformed-input class gets its own code
// so tests can assert the precise failure.
enum class ParseCode {
    truncated,
    bad_magic,
    bad_version,
    platform_mismatch,
    bad_alphabet,
    bad_nucleus_size,
    bad_tag,
    bad_leaf_id,
    bad_permutation,
    trailing_bytes,
    not_canonical,
    bad_integer,
    limit_exceeded,
    bad_count,
};

class ParseError : public std::runtime_error {
public:
    ParseError(ParseCode code, const std::string& what)
        : std::runtime_error(what), code_(code) {}
    ParseCode code() const { return code_; }

private:
    ParseCode code_;
};

// Text config file problems (key=value platform descriptions).
class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Wire protocol failures; codes are also what an ERROR frame carries.
enum class WireCode : std::uint8_t {
    bad_magic = 0x01,
    version_mismatch = 0x02,
    platform_mismatch = 0x03,
    params_mismatch = 0x04,
    frame_too_large = 0x05,
    truncated = 0x06,
    out_of_order = 0x07,
    confirm_mismatch = 0x08,
    malformed = 0x09,
    peer_error = 0x0A,
    io = 0x0B,
};

class WireError : public std::runtime_error {
public:
    WireError(WireCode code, const std::string& what)
        : std::runtime_error(what), code_(code) {}
    WireCode code() const { return code_; }

private:
    WireCode code_;
};

} // namespace aag
