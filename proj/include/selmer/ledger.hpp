#pragma once

// Dimension bookkeeping: the global duality balance of local condition
// dimensions, the trivial-prime growth bound, the isogeny-side lower bound,
// and the lifting-plan arithmetic with its audit trace.

#include <algorithm>
#include <stdexcept>
#include <string>
#include <vector>

namespace selmer {

enum class EntrySource { computed, table, config };

struct LocalConditionEntry {
    std::string place;  // decimal prime, "p", or "inf"
    int dim_N;
    int h0;
    EntrySource source = EntrySource::table;
};

struct GlobalTerms {
    int h0_M = 0;
    int h0_Mstar = 0;
};

// Selmer minus dual-Selmer dimension: h0(M) - h0(M*) + sum(dim N_l - h0_l).
inline int wiles_balance(const std::vector<LocalConditionEntry>& entries, const GlobalTerms& globals) {
    bool has_inf = false;
    int sum = 0;
    for (const auto& e : entries) {
        if (e.place == "inf") has_inf = true;
        sum += e.dim_N - e.h0;
    }
    if (!has_inf) throw std::invalid_argument("archimedean place required");
    return globals.h0_M - globals.h0_Mstar + sum;
}

// Standard ledger rows: a trivial prime contributes a balanced (3, 3) entry;
// the archimedean place contributes (0, 1); the p-row (h0_p + 1, h0_p).
inline LocalConditionEntry trivial_prime_entry(i64 ell) {
    return {std::to_string(ell), 3, 3, EntrySource::table};
}
inline LocalConditionEntry archimedean_entry() { return {"inf", 0, 1, EntrySource::table}; }
inline LocalConditionEntry p_entry(int h0_p) { return {"p", h0_p + 1, h0_p, EntrySource::table}; }

// Each added trivial prime can grow the Selmer dimension by at most
// dim(H^1/H^1_nr) = 3.
inline int selmer_growth_bound(int base_dim, int added_trivial_primes) {
    return base_dim + 3 * added_trivial_primes;
}

// g(A') minus the local defects: the certified lower bound on the p-torsion
// of the Bloch-Kato Selmer group under the stated global hypotheses. At most
// one entry (the p-place) may exceed the per-prime cap 2, up to the
// configured p-place bound.
inline int greenberg_bk_bounds(int g_Aprime, const std::vector<int>& deltas, int delta_p_bound = 6) {
    int sum = 0;
    bool used_p_slot = false;
    for (int d : deltas) {
        if (d < 0) throw std::invalid_argument("violates Lemma delta-bounds");
        if (d > 2) {
            if (used_p_slot || d > delta_p_bound) throw std::invalid_argument("violates Lemma delta-bounds");
            used_p_slot = true;
        }
        sum += d;
    }
    return g_Aprime - sum;
}

// Cassels-type cokernel bound: m* + dim H^0 of the p-torsion of the dual.
inline int cok_bound(int m_star, int h0_torsion) {
    if (m_star < 0 || h0_torsion < 0) throw std::invalid_argument("negative input");
    return m_star + h0_torsion;
}

struct LiftingPlan {
    int n;            // number of auxiliary ramified primes
    int m_prime;      // dim of the auxiliary-level Selmer group
    int T_size;
    int Z_max = 2;    // budget of extra trivial primes per step
    int delta_p_bound = 6;
};

struct PlanReport {
    int m_bound;
    int selmer_growth;
    int intermediate_bound;
    int final_bound;
    std::vector<std::string> trace;
};

inline PlanReport plan_bound(const LiftingPlan& plan) {
    if (plan.n < 0 || plan.m_prime < 0 || plan.T_size < 0) throw std::invalid_argument("negative input");
    if (plan.Z_max > 2) throw std::invalid_argument("trivial-prime budget exceeds 2");
    PlanReport rep;
    int m_eff = std::max(plan.m_prime, 3);
    rep.m_bound = m_eff + 6;
    rep.selmer_growth = selmer_growth_bound(m_eff, plan.Z_max) + (2 - plan.Z_max) * 3;
    rep.intermediate_bound = plan.n / 2 - 2 * (rep.m_bound + plan.T_size) - 4;
    rep.final_bound = plan.n / 2 - 2 * (m_eff + 8 + plan.T_size);
    if (rep.intermediate_bound != rep.final_bound) throw std::logic_error("bound forms disagree");
    rep.trace = {
        "m <= max(m', 3) + 3*#Z with #Z <= 2: m_bound = " + std::to_string(rep.m_bound),
        "per-prime defect bound: delta_l <= 2 away from p, delta_p <= " + std::to_string(plan.delta_p_bound),
        "auxiliary-prime count n gives g >= n/2 on the swapped lattice",
        "lower bound: floor(n/2) - 2*(m_bound + #T) - 4 = " + std::to_string(rep.intermediate_bound),
        "equivalently floor(n/2) - 2*(max(m',3) + 8 + #T) = " + std::to_string(rep.final_bound),
    };
    return rep;
}

// Smallest even n whose plan bound reaches the target.
inline int minimal_n_for_target(int target, int m_prime, int T_size) {
    int m_eff = std::max(m_prime, 3);
    int n = 2 * (target + 2 * (m_eff + 8 + T_size));
    return n;
}

}  // namespace selmer
