#pragma once

// JSON serialization of the toolkit's value types (nlohmann::json), used by
// the command-line front end's report format.

#include <json.hpp>

#include "selmer/cohomology.hpp"
#include "selmer/isogeny.hpp"
#include "selmer/iwasawa.hpp"
#include "selmer/ledger.hpp"
#include "selmer/tame.hpp"

namespace selmer {

using json = nlohmann::json;

inline json to_json(const Mat2& m) {
    return json::array({json::array({m.at(1, 1).value(), m.at(1, 2).value()}),
                        json::array({m.at(2, 1).value(), m.at(2, 2).value()})});
}

inline json to_json(const TameDeformation& d) {
    return {{"p", d.prime.p}, {"l", d.prime.ell}, {"n", d.n}, {"k", d.k},
            {"Msigma", to_json(d.Msigma)}, {"Mtau", to_json(d.Mtau)}};
}

// eight residues: both matrices stored in full, trace-zero validated on read
inline json to_json(const AdCocycle& c) {
    return {{"sigma", to_json(c.Csigma)}, {"tau", to_json(c.Ctau)}};
}

inline json to_json(const CocycleSpace& s) {
    json basis = json::array();
    for (const auto& c : s.basis) basis.push_back(to_json(c));
    return {{"label", s.label}, {"dim", s.dim()}, {"basis", basis}};
}

inline json to_json(const LocalLatticeAction& a) {
    return {{"p", a.prime.p}, {"l", a.prime.ell}, {"n", a.n},
            {"Ssigma", to_json(a.Ssigma)}, {"Stau", to_json(a.Stau)},
            {"psi_sigma", a.psi_sigma.value()}, {"psi_tau", a.psi_tau.value()}};
}

inline json to_json(const CotorsionReport& r) {
    return {{"inertia_structure", r.inertia_structure},
            {"tamagawa_order", r.tamagawa_order},
            {"delta", r.delta},
            {"h0_finite", r.h0_finite},
            {"h0_order", r.h0_order}};
}

inline json to_json(const LambdaSeries& s) {
    return {{"p", s.p}, {"N", s.N}, {"D", s.D}, {"coeffs", s.coeffs}};
}

inline json to_json(const DistinguishedPoly& f) {
    return {{"degree", f.degree}, {"coeffs", f.coeffs}};
}

inline json to_json(const PlanReport& r) {
    return {{"m_bound", r.m_bound}, {"selmer_growth", r.selmer_growth},
            {"intermediate_bound", r.intermediate_bound}, {"final_bound", r.final_bound},
            {"trace", r.trace}};
}

}  // namespace selmer
