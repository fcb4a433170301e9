#ifndef TWC_VERIFY_HPP
#define TWC_VERIFY_HPP

#include "twc/deformations.hpp"
#include "twc/senlattice.hpp"

#include <functional>

namespace twc {

struct SuiteResult {
    std::string name;
    long long cases = 0;
    long long failures = 0;
    std::string counterexample;  // first failing datum, serialized

    bool ok() const { return failures == 0; }
};

using ModifyFn =
    std::function<ModifyResult<Rat>(const SenLattice<Rat>&, const SenFactorization<Rat>&)>;

/// Random semisimple operators, random coprime splits: the modification's Sen
/// polynomial must be q(T-1)s(T), the oracle must find exactly the same
/// single subspace, and the round trip must restore the operator whenever the
/// gap guard allows. The modify hook exists so tests can inject a fault.
SuiteResult suite_lattice_uniqueness(unsigned long long seed, const ModifyFn& modify);
SuiteResult suite_lattice_uniqueness(unsigned long long seed);

/// etale_crys against the refinement-enumerating oracle on random data.
SuiteResult suite_etale_equivalence(unsigned long long seed);

/// Exhaustive order-independence of composite pullbacks (n <= 4, two
/// embeddings, multiplicities <= 2).
SuiteResult suite_commutation();

/// Exhaustive adjacent-swap rearrangement over all refinements and seeded
/// random flags, n <= 5, with independent post-swap recomputation.
SuiteResult suite_rearrangement(unsigned long long seed);

/// kappa / Baer / pullback homomorphism identities and the additive eps law
/// of deformed Sen polynomials.
SuiteResult suite_kappa_homomorphism(unsigned long long seed);

/// Dot-action identities: w0 . (w0 xi) = xi - 2 rho and associativity.
SuiteResult suite_dot_identities(unsigned long long seed);

std::vector<SuiteResult> run_all_suites(unsigned long long seed);

}  // namespace twc

#endif
