#ifndef TWC_SLOPES_HPP
#define TWC_SLOPES_HPP

#include "twc/refinements.hpp"
#include "twc/trianguline.hpp"

namespace twc {

/// Prefix-sum slope report: partials[m-1] is the degree-like sum after m
/// steps, total the full sum; verdict holds iff every proper prefix
/// constraint is met and the total constraint is exact.
struct SlopeReport {
    std::vector<Rat> partials;
    Rat total;
    bool verdict = false;
    std::vector<int> violations;  // 1-based prefix lengths that fail
};

/// Slope of a rank-1 module: uval(delta) / f.
Rat slope_rank1(const Character& delta, const FieldShape& shape);

/// Etale test for very generic strongly non-split modules: uval prefix sums
/// nonnegative, total zero. Requires the matching class tag.
SlopeReport etale_vgen(const TriangModule& d);

struct TwistFeasibility {
    bool feasible = false;
    Rat chi_uval;  // -j/(n*e) for a single pullback step
    std::vector<int> violations;
};

/// Whether p_{j,sigma}(D) is etale up to an unramified twist, with the twist
/// valuation forced to -j/(n*e) by the degree balance.
TwistFeasibility etale_pullback_vgen(const TriangModule& d, int j, const std::string& sigma);

/// Etale test for non-critical crystabelline data: sorts the smooth-character
/// valuations ascending and checks them against the weight prefix sums.
SlopeReport etale_crys(const CrysModule& m);

struct EtaleOracleReport {
    SlopeReport report;
    bool agrees = true;  // oracle verdict equals etale_crys verdict
    std::optional<std::pair<std::vector<int>, int>> negative_witness;  // (w, prefix length)
};

/// Independent oracle: enumerates every refinement and every prefix length,
/// computes the submodule slope directly, and requires total slope zero with
/// no strictly negative saturated submodule.
EtaleOracleReport brute_force_etale(const CrysModule& m);

/// Unramified-twist solver over a composite program: each (i, sigma, k) step
/// adds i*k/e to the total degree sum, so the balancing twist has uval
/// -(added)/n; returns nullopt when the post-twist prefix inequalities fail.
std::optional<Rat> twist_to_etale(const TriangModule& d, const Program& program);
std::optional<Rat> twist_to_etale(const CrysModule& m, const Program& program);

}  // namespace twc

#endif
