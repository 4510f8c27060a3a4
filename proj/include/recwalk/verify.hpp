#pragma once

#include "recwalk/record.hpp"
#include "recwalk/samplers.hpp"
#include "recwalk/stats.hpp"
#include "recwalk/transforms.hpp"

namespace recwalk {

// Worker count for sample fan-out; RECWALK_THREADS overrides. Results are
// bit-identical regardless of the thread count (per-sample RNG streams,
// commutative aggregation).
unsigned default_threads();

// chi-square of (S_tau, X_{tau-1}) against P[X0=k] c^{k-j}, runs capped at
// `cap` steps with censoring accounting; works in all three drift phases
// (tau = infinity carries the 1 - m(pi) mass when the mean is negative).
TestReport check_tau_joint_law(const IncrementDistribution& d, std::uint64_t n, long long cap,
                               std::uint64_t seed);

// Negative-mean marginal: P[tau < inf, X_{tau-1} = k] = (k+1) P[X0 = k],
// each k within 3 sigma.
TestReport check_tau_negative_marginal(const IncrementDistribution& d, std::uint64_t n,
                                       long long cap, std::uint64_t seed);

// Empirical P[walk from 0 ever hits -k] against c^k for k = 1..k_max.
TestReport check_hitting_powers(const IncrementDistribution& d, int k_max, std::uint64_t n_per_k,
                                std::uint64_t seed);

// P[root has a parent] = E[X0] + 1 for negative mean, and the grandparent
// conditional equals the same value.
TestReport check_parent_probability(const IncrementDistribution& d, std::uint64_t n,
                                    long long cap, std::uint64_t seed);

// Phase evidence by drift sign: finite components (mean < 0), in-window
// connectivity of {-W..0} (mean 0), bi-infinite-path evidence (mean > 0).
TestReport check_phase(const IncrementDistribution& d, long long window, std::uint64_t n,
                       std::uint64_t seed);

// Radius-r canonical-key law of the component of 0 against the matching tree
// sampler: TGWT (mean < 0), EGWT (mean 0), marked MEKT via the positive-mean
// construction (mean > 0). TV threshold 0.02.
TestReport check_component_law(const IncrementDistribution& d, int radius, std::uint64_t n,
                               std::uint64_t seed);

// Joint (mark, bush offspring) law P[X0 = n+k] c^k from the MEKT bush
// sampler and from a margin-certified conditioned-walk simulation.
TestReport check_joint_mark_law(const IncrementDistribution& d, std::uint64_t n,
                                std::uint64_t seed);

// Radon-Nikodym check: E[h(theta^n .)] = E[h(.) d_n(0)] for the four
// radius-1 mark patterns and n = 1..max_n, paired 3-sigma tests.
TestReport check_dn_radon_nikodym(const IncrementDistribution& d, int max_n, std::uint64_t n,
                                  std::uint64_t seed);

enum class FprobPair { egwt_to_ekt, tgwt_to_sbgw, umekt_to_mekt, canopy_to_regular };

// Radius-r key law of the source re-rooted at F^depth(root) against the
// target sampler. For canopy_to_regular the comparison is exact structural
// equality against the T_{d+1} ball (d fixed to 2, geometric level law).
TestReport check_fprob_limit(FprobPair pair, const IncrementDistribution& d, int radius,
                             int depth, std::uint64_t n, std::uint64_t seed);

// Mark patterns (X_{R_perp(0)+m})_{|m|<=r} against the i.i.d. product law.
TestReport check_rperp_preservation(const IncrementDistribution& d, int radius, std::uint64_t n,
                                    std::uint64_t seed);

// Negative-side mark tuples (Y_{-1}..Y_{-radius}) from Construction 1,
// Construction 2 and Phi_R(EKT), pairwise TV.
TestReport check_constructions_agree(const IncrementDistribution& d, int radius, std::uint64_t n,
                                     std::uint64_t seed);

// Every boundary-clear R-foil of an R-probability window (those containing a
// construction-certified path vertex) has that vertex as its minimal element.
TestReport check_foil_minimality(const IncrementDistribution& d, std::uint64_t windows,
                                 long long span, std::uint64_t seed);

// SR/C record representation: component of 0 in the shift graph versus the
// record graph rebuilt from its backward-map sequence, radius-r key laws.
TestReport check_record_representation(ShiftKind shift, const IncrementDistribution& d,
                                       int radius, std::uint64_t n, long long margin,
                                       std::uint64_t seed);

// Phi_R . Psi_R mark-exactness on the uncensored core over seeded windows.
TestReport check_roundtrip_zero_mean(const IncrementDistribution& d, std::uint64_t windows,
                                     long long span, std::uint64_t seed);

// PhiHat_R . PsiHat_R on construction-positive windows.
TestReport check_roundtrip_positive_mean(const IncrementDistribution& d, std::uint64_t windows,
                                         long long span, std::uint64_t seed);

// d_1(i) = x_{i-1}+1 on resolved type -1 vertices (zero-mean windows) and
// d_1 = x_{i-1}+1-t on certified path vertices (positive construction),
// exhaustively until target_vertices checks accumulate.
TestReport check_offspring_identity(const IncrementDistribution& d_zero,
                                    const IncrementDistribution& d_pos,
                                    std::uint64_t target_vertices, std::uint64_t seed);

}  // namespace recwalk
