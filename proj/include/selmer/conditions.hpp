#pragma once

// Shared vocabulary for the local deformation conditions at trivial primes:
// the prime pair (p, l), the Type I/II/III conjugators, and the shape
// parameters (x, y) with their divisibility classes.

#include <stdexcept>

#include "selmer/padic.hpp"

namespace selmer {

// l = 1 mod p but l != 1 mod p^2, so v_p(l - 1) = 1.
struct TrivialPrime {
    i64 p;
    i64 ell;

    TrivialPrime(i64 p_, i64 ell_) : p(p_), ell(ell_) {
        if (p < 5) throw std::invalid_argument("TrivialPrime: p >= 5 required");
        if ((ell - 1) % p != 0 || (ell - 1) % (p * p) == 0)
            throw std::invalid_argument("TrivialPrime: need l = 1 mod p, l != 1 mod p^2");
    }
};

enum class ConditionTag { I, II, III };
enum class ShapeBase { nr, ram };

// Each condition is a fixed conjugate of the upper-triangular shape family;
// Type I sits over the unramified class (p^2 | x, y), Types II and III over
// the ramified one (p^2 | x, p || y).
struct ConditionType {
    ConditionTag tag;

    ShapeBase base() const { return tag == ConditionTag::I ? ShapeBase::nr : ShapeBase::ram; }

    Mat2 conjugator(i64 p, int n) const {
        switch (tag) {
            case ConditionTag::I: return Mat2::from_values(p, n, 1, 0, 1, 1);
            case ConditionTag::II: return Mat2::from_values(p, n, 0, 1, 1, 0);
            case ConditionTag::III: return Mat2::from_values(p, n, 0, 1, 1, 1);
        }
        throw std::logic_error("unreachable");
    }

    const char* name() const {
        switch (tag) {
            case ConditionTag::I: return "I";
            case ConditionTag::II: return "II";
            case ConditionTag::III: return "III";
        }
        return "?";
    }
};

struct ShapeParams {
    PAdic x, y;

    // nr: v(x) >= 2 and v(y) >= 2; ram: v(x) >= 2 and v(y) = 1.
    bool admissible_for(ShapeBase b) const {
        if (x.valuation() < 2) return false;
        return b == ShapeBase::nr ? y.valuation() >= 2 : y.valuation() == 1;
    }
};

}  // namespace selmer
